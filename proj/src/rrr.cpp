#include "acoint/rrr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace acoint {

namespace {

constexpr double kEigenCap = 1.0 - 1e-12;

Matrix regress_out(const Matrix& z, const Matrix& y, Matrix& coef) {
  if (z.cols() == 0) {
    coef.resize(0, y.cols());
    return y;
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(z);
  qr.setThreshold(1e-10);
  if (qr.rank() < z.cols())
    throw Error(ErrorKind::RankDeficient,
                "short-run regressor block z is rank deficient (rank " +
                    std::to_string(qr.rank()) + " of " + std::to_string(z.cols()) + ")");
  coef = qr.solve(y);
  return y - z * coef;
}

double log_det_spd(const Matrix& m, const char* what) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::NotPositiveDefinite, std::string(what) + " is not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

struct Whitened {
  Vector values;   // descending
  Matrix vectors;  // columns are beta directions (S11-orthonormal)
};

// Generalised symmetric eigenproblem  S10 W S01 v = lambda S11 v.
Whitened whitened_eigen(const Matrix& s11, const Matrix& middle) {
  Eigen::LLT<Matrix> llt(s11);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::NotPositiveDefinite,
                "S11 is not positive definite; the lagged levels are collinear");
  const Matrix L = llt.matrixL();
  const auto Ltri = L.triangularView<Eigen::Lower>();
  Matrix A = Ltri.solve(middle);
  A = Ltri.solve(A.transpose()).transpose();
  A = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  const Eigen::Index n = A.rows();
  Whitened out;
  out.values.resize(n);
  Matrix V(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = es.eigenvalues()(n - 1 - i);
    V.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  out.vectors = L.transpose().triangularView<Eigen::Upper>().solve(V);
  return out;
}

Matrix s00_inverse_middle(const ConcentratedMoments& m, const Matrix& weight) {
  return m.s01.transpose() * weight * m.s01;
}

void fill_common(const ConcentratedMoments& m, int r, Matrix beta,
                 const std::optional<Matrix>& c, RrrEstimate& est) {
  const int p1 = m.p1();
  est.r = r;
  if (r > 0) {
    const Matrix cc = c ? *c : default_normalization(p1, r);
    beta = normalize_beta(beta, cc);
    const Matrix bsb = beta.transpose() * m.s11 * beta;
    est.params.alpha = m.s01 * beta * bsb.inverse();
  } else {
    beta.resize(p1, 0);
    est.params.alpha.resize(m.p, 0);
  }
  est.beta_aug = beta;
  est.residuals = m.r0 - m.r1 * beta * est.params.alpha.transpose();
  est.psi = m.dy_on_z.transpose() - est.params.alpha * beta.transpose() * m.x_on_z.transpose();
  VecmSpec spec{m.p, m.k, r, m.det, m.k};
  est.params = VecmParams::from_blocks(spec, est.params.alpha, beta, est.psi);
  est.sigma = est.residuals.transpose() * est.residuals / static_cast<double>(m.T);
}

}  // namespace

Matrix default_normalization(int p1, int r) {
  return Matrix::Identity(p1, r);
}

Matrix normalize_beta(const Matrix& beta, const Matrix& c) {
  if (beta.cols() == 0) return beta;
  if (c.rows() != beta.rows() || c.cols() != beta.cols())
    throw Error(ErrorKind::DimensionMismatch, "normalisation matrix must be p1 x r");
  const Matrix cb = c.transpose() * beta;
  Eigen::FullPivLU<Matrix> lu(cb);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible())
    throw Error(ErrorKind::RankDeficient, "c' beta is singular; cannot normalise beta");
  return beta * lu.inverse();
}

ConcentratedMoments concentrate(const LagDesign& design) {
  ConcentratedMoments m;
  m.T = design.T();
  m.p = design.p;
  m.k = design.k;
  m.det = design.det;
  m.r0 = regress_out(design.z, design.dy, m.dy_on_z);
  m.r1 = regress_out(design.z, design.x_lag, m.x_on_z);
  const double inv_t = 1.0 / static_cast<double>(m.T);
  m.s00 = m.r0.transpose() * m.r0 * inv_t;
  m.s01 = m.r0.transpose() * m.r1 * inv_t;
  m.s11 = m.r1.transpose() * m.r1 * inv_t;
  return m;
}

RrrEstimate solve_rrr(const ConcentratedMoments& m, int r, const std::optional<Matrix>& c) {
  if (r < 0 || r > m.p) throw Error(ErrorKind::InvalidArgument, "rank out of range");
  Eigen::LLT<Matrix> s00_llt(m.s00);
  if (s00_llt.info() != Eigen::Success)
    throw Error(ErrorKind::NotPositiveDefinite, "S00 is not positive definite");
  const Matrix s00_inv = s00_llt.solve(Matrix::Identity(m.p, m.p));
  Whitened w = whitened_eigen(m.s11, s00_inverse_middle(m, s00_inv));

  RrrEstimate est;
  est.eigenvalues = w.values.array().max(0.0).min(kEigenCap);
  fill_common(m, r, w.vectors.leftCols(r), c, est);

  const double log_det_s00 = log_det_spd(m.s00, "S00");
  double sum_log = 0.0;
  for (int i = 0; i < r; ++i) sum_log += std::log1p(-est.eigenvalues(i));
  const double T = m.T;
  est.loglik = -0.5 * T * (m.p * std::log(2.0 * std::numbers::pi) + log_det_s00 + sum_log + m.p);
  return est;
}

RrrEstimate solve_rrr_fixed_covariance(const ConcentratedMoments& m, int r, const Matrix& omega,
                                       const std::optional<Matrix>& c) {
  if (r < 0 || r > m.p) throw Error(ErrorKind::InvalidArgument, "rank out of range");
  Eigen::LLT<Matrix> llt(omega);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::NotPositiveDefinite, "fixed covariance is not positive definite");
  const Matrix omega_inv = llt.solve(Matrix::Identity(m.p, m.p));
  Whitened w = whitened_eigen(m.s11, s00_inverse_middle(m, omega_inv));

  RrrEstimate est;
  est.eigenvalues = w.values;
  fill_common(m, r, w.vectors.leftCols(r), c, est);
  const double T = m.T;
  const double quad = (est.residuals * omega_inv).cwiseProduct(est.residuals).sum();
  est.loglik = -0.5 * T * m.p * std::log(2.0 * std::numbers::pi) -
               0.5 * T * log_det_spd(omega, "fixed covariance") - 0.5 * quad;
  return est;
}

double trace_statistic(const Vector& eigenvalues, int T, int p, int r) {
  if (r < 0 || r > p) throw Error(ErrorKind::InvalidArgument, "rank out of range");
  double s = 0.0;
  for (int i = r; i < p; ++i) s -= std::log1p(-std::clamp(eigenvalues(i), 0.0, kEigenCap));
  return static_cast<double>(T) * s;
}

double trace_statistic(const ConcentratedMoments& m, int r) {
  Eigen::LLT<Matrix> s00_llt(m.s00);
  if (s00_llt.info() != Eigen::Success)
    throw Error(ErrorKind::NotPositiveDefinite, "S00 is not positive definite");
  const Matrix s00_inv = s00_llt.solve(Matrix::Identity(m.p, m.p));
  const Whitened w = whitened_eigen(m.s11, s00_inverse_middle(m, s00_inv));
  return trace_statistic(w.values, m.T, m.p, r);
}

double unrestricted_loglik(const ConcentratedMoments& m) { return solve_rrr(m, m.p).loglik; }

}  // namespace acoint
