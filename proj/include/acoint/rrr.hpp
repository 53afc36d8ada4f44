#pragma once

#include <optional>

#include "acoint/varmodel.hpp"

namespace acoint {

/// Product moments of the residuals R0 (Delta X on z) and R1 (augmented
/// X_{t-1} on z), plus the partialling coefficients needed to recover Psi.
struct ConcentratedMoments {
  Matrix s00, s01, s11;
  Matrix r0, r1;
  Matrix dy_on_z;  ///< z_cols x p,  (z'z)^{-1} z' dy
  Matrix x_on_z;   ///< z_cols x p1, (z'z)^{-1} z' x_lag
  int T = 0;
  int p = 0;
  int k = 1;
  DeterministicCase det = DeterministicCase::None;

  int p1() const { return static_cast<int>(s11.rows()); }
  Matrix s10() const { return s01.transpose(); }
};

ConcentratedMoments concentrate(const LagDesign& design);

struct RrrEstimate {
  Vector eigenvalues;   ///< descending, length p1, clipped to [0, 1 - 1e-12]
  Matrix beta_aug;      ///< p1 x r, satisfies c' beta_aug = I_r
  Matrix psi;           ///< p x z_cols
  VecmParams params;
  double loglik = 0.0;
  Matrix sigma;         ///< residual covariance Omega-hat
  Matrix residuals;     ///< T x p
  int r = 0;
};

/// First r columns of the identity: the default normalisation matrix.
Matrix default_normalization(int p1, int r);

/// Johansen's Gaussian reduced-rank regression under rank r, with Omega
/// concentrated out. Solves |lambda S11 - S10 S00^{-1} S01| = 0 after
/// Cholesky-whitening S11.
RrrEstimate solve_rrr(const ConcentratedMoments& m, int r,
                      const std::optional<Matrix>& c = std::nullopt);

/// Reduced-rank regression under rank r with the error covariance held
/// fixed at omega (not estimated). The loglik field is the Gaussian
/// log-likelihood at that fixed covariance. With omega = I this is the
/// closed-form maximiser of the identity-weighted pseudo-likelihood.
RrrEstimate solve_rrr_fixed_covariance(const ConcentratedMoments& m, int r,
                                       const Matrix& omega,
                                       const std::optional<Matrix>& c = std::nullopt);

/// -T sum_{i=r+1}^{p} log(1 - lambda_i).
double trace_statistic(const ConcentratedMoments& m, int r);
double trace_statistic(const Vector& eigenvalues, int T, int p, int r);

/// Gaussian log-likelihood of the unrestricted VAR in differences with
/// Omega concentrated out.
double unrestricted_loglik(const ConcentratedMoments& m);

/// Normalise the columns of beta so that c' beta = I_r.
Matrix normalize_beta(const Matrix& beta, const Matrix& c);

}  // namespace acoint
