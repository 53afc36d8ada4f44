#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "acoint/varmodel.hpp"
#include "acoint/volatility.hpp"

namespace acoint {

/// Volatility-weighted Gaussian log-likelihood
///   -(Tp/2) log 2pi - 1/2 sum log|Sigma_t| - 1/2 sum e_t' Sigma_t^{-1} e_t.
double adaptive_loglik(const LagDesign& design, const VecmParams& params,
                       const VolatilityPath& vol);
double adaptive_loglik(const Matrix& residuals, const VolatilityPath& vol);

/// sum_t e_t' Sigma_t^{-1} e_t.
double weighted_ssr(const Matrix& residuals, const VolatilityPath& vol);

/// Weighted least squares of y_t on the rows of w with per-t weight
/// Sigma_t^{-1}; returns the p x m coefficient matrix.
Matrix weighted_gls(const Matrix& w, const Matrix& y, const VolatilityPath& vol);

struct GlsFit {
  Matrix alpha;      ///< p x r
  Matrix psi;        ///< p x z_cols
  Matrix residuals;  ///< T x p
  double loglik = 0.0;
};

/// Closed-form maximiser over (alpha, Psi) with beta~ (p1 x r) held fixed.
GlsFit gls_update_given_beta(const LagDesign& design, const Matrix& beta_aug,
                             const VolatilityPath& vol);

/// Closed-form maximiser over beta~ = c-bar + c_perp Phi' with (alpha, Psi)
/// held fixed. The result satisfies c' beta~ = I_r.
Matrix gls_update_given_alpha_psi(const LagDesign& design, const Matrix& alpha,
                                  const Matrix& psi, const VolatilityPath& vol,
                                  const Matrix& c);

struct GrrrOptions {
  double tol = 1e-9;
  int max_iter = 500;
  int extra_starts = 3;
  std::optional<Matrix> c;
  std::uint64_t seed = 0x5eedULL;
};

struct GrrrEstimate {
  VecmParams params;
  Matrix beta_aug;  ///< p1 x r (identity-normalised); empty when r = p
  Matrix pi_aug;    ///< p x p1, alpha beta~'
  Matrix psi;       ///< p x z_cols
  double loglik = 0.0;
  Matrix residuals;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;  ///< final relative loglik change
  int monotonicity_violations = 0;
  int starts_used = 1;
  std::vector<double> loglik_path;
};

/// Maximise the weighted likelihood of H_{k,r} by switching between the two
/// GLS updates. r = 0 and r = p reduce to a single GLS regression.
GrrrEstimate switch_estimate(const LagDesign& design, const VecmSpec& spec,
                             const VolatilityPath& vol,
                             const std::optional<VecmParams>& init = std::nullopt,
                             const GrrrOptions& options = {});

}  // namespace acoint
