#include "acoint/volatility.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

namespace acoint {

const char* to_string(Kernel k) {
  return k == Kernel::Gaussian ? "gaussian" : "epanechnikov";
}

Kernel parse_kernel(const std::string& name) {
  if (name == "gaussian") return Kernel::Gaussian;
  if (name == "epanechnikov") return Kernel::Epanechnikov;
  throw Error(ErrorKind::InvalidArgument, "unknown kernel '" + name + "'");
}

double KernelSpec::operator()(double x) const {
  switch (kernel) {
    case Kernel::Gaussian:
      return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    case Kernel::Epanechnikov:
      return std::abs(x) <= 1.0 ? 0.75 * (1.0 - x * x) : 0.0;
  }
  return 0.0;
}

double VolatilityPath::sum_log_det() const {
  double s = 0.0;
  for (double v : log_dets) s += v;
  return s;
}

VolatilityPath VolatilityPath::identity(int T, int p) {
  VolatilityPath v;
  v.sigmas.assign(T, Matrix::Identity(p, p));
  v.sqrts = v.sigmas;
  v.inverses = v.sigmas;
  v.log_dets.assign(T, 0.0);
  return v;
}

namespace {

void factorize(VolatilityPath& v, std::size_t t) {
  const Matrix& s = v.sigmas[t];
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::NotPositiveDefinite,
                "Sigma_" + std::to_string(t + 1) + " is not positive definite");
  v.sqrts[t] = llt.matrixL();
  v.inverses[t] = llt.solve(Matrix::Identity(s.rows(), s.cols()));
  v.log_dets[t] = 2.0 * v.sqrts[t].diagonal().array().log().sum();
}

// Kernel value for every lag |t - s| = 0..T-1. Weights depend on the lag only.
Vector lag_kernel(int T, double h, const KernelSpec& ks) {
  Vector w(T);
  for (int lag = 0; lag < T; ++lag) w(lag) = ks(lag / (static_cast<double>(T) * h));
  return w;
}

// T x p^2 matrix whose row s is vec(e_s e_s').
Matrix outer_products(const Matrix& e) {
  const Eigen::Index T = e.rows(), p = e.cols();
  Matrix out(T, p * p);
  for (Eigen::Index s = 0; s < T; ++s)
    for (Eigen::Index j = 0; j < p; ++j)
      for (Eigen::Index i = 0; i < p; ++i) out(s, i + j * p) = e(s, i) * e(s, j);
  return out;
}

void check_bandwidth(double h, Eigen::Index T) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw Error(ErrorKind::InvalidArgument, "bandwidth must be positive and finite");
  if (T < 2) throw Error(ErrorKind::SampleTooSmall, "kernel smoothing needs T >= 2");
}

// Smoothed vec(Sigma_t) rows, optionally leaving out s = t.
Matrix smooth(const Matrix& outer, double h, const KernelSpec& ks, bool leave_one_out) {
  const int T = static_cast<int>(outer.rows());
  const Vector w = lag_kernel(T, h, ks);
  Matrix weights(T, T);
  for (int s = 0; s < T; ++s)
    for (int t = 0; t < T; ++t) weights(t, s) = w(std::abs(t - s));
  if (leave_one_out) weights.diagonal().setZero();
  const Vector totals = weights.rowwise().sum();
  for (int t = 0; t < T; ++t)
    if (!(totals(t) > 0.0))
      throw Error(ErrorKind::ZeroKernelWeights,
                  "all kernel weights are zero at t=" + std::to_string(t + 1) +
                      "; increase the bandwidth");
  return totals.cwiseInverse().asDiagonal() * (weights * outer);
}

}  // namespace

VolatilityPath VolatilityPath::from_sigmas(std::vector<Matrix> sigmas, double bandwidth) {
  VolatilityPath v;
  v.bandwidth = bandwidth;
  v.sigmas = std::move(sigmas);
  v.sqrts.resize(v.sigmas.size());
  v.inverses.resize(v.sigmas.size());
  v.log_dets.resize(v.sigmas.size());
  for (std::size_t t = 0; t < v.sigmas.size(); ++t) factorize(v, t);
  return v;
}

Matrix levels_var_residuals(const TimeSeriesMatrix& data, int K, bool intercept) {
  if (K < 1) throw Error(ErrorKind::InvalidArgument, "levels VAR order K must be >= 1");
  if (data.presample_rows() < K)
    throw Error(ErrorKind::SampleTooSmall, "levels VAR(K) needs K initial values");
  const int T = data.T(), p = data.p();
  if (T <= p * K + p)
    throw Error(ErrorKind::SampleTooSmall, "levels VAR(K) needs T > pK + p");
  const int c0 = intercept ? 1 : 0;
  Matrix design(T, c0 + p * K);
  Matrix y(T, p);
  for (int t = 1; t <= T; ++t) {
    if (intercept) design(t - 1, 0) = 1.0;
    for (int i = 1; i <= K; ++i) design.row(t - 1).segment(c0 + (i - 1) * p, p) = data.level(t - i);
    y.row(t - 1) = data.level(t);
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < design.cols())
    throw Error(ErrorKind::RankDeficient, "levels VAR(K) design is rank deficient");
  return y - design * qr.solve(y);
}

Vector kernel_weights(int T, int t, double h, const KernelSpec& ks, bool leave_one_out) {
  Vector w(T);
  for (int s = 1; s <= T; ++s) w(s - 1) = ks((t - s) / (static_cast<double>(T) * h));
  if (leave_one_out) w(t - 1) = 0.0;
  const double total = w.sum();
  if (!(total > 0.0)) throw Error(ErrorKind::ZeroKernelWeights, "all kernel weights are zero");
  return w / total;
}

VolatilityPath kernel_covariance_path(const Matrix& residuals, double h, const KernelSpec& ks) {
  check_bandwidth(h, residuals.rows());
  const Eigen::Index T = residuals.rows(), p = residuals.cols();
  const Matrix smoothed = smooth(outer_products(residuals), h, ks, false);

  VolatilityPath v;
  v.bandwidth = h;
  v.sigmas.resize(T);
  v.sqrts.resize(T);
  v.inverses.resize(T);
  v.log_dets.resize(T);
  for (Eigen::Index t = 0; t < T; ++t) {
    Matrix s = Eigen::Map<const Matrix>(smoothed.row(t).eval().data(), p, p);
    s = 0.5 * (s + s.transpose());
    const double tr = s.trace();
    Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < 1e-10 * tr || !(tr > 0.0)) {
      const double ridge = tr > 0.0 ? 1e-8 * tr : 1e-8;
      s += ridge * Matrix::Identity(p, p);
      ++v.ridge_repairs;
    }
    v.sigmas[t] = std::move(s);
    factorize(v, static_cast<std::size_t>(t));
  }
  return v;
}

double cv_objective(const Matrix& residuals, double h, const KernelSpec& ks) {
  check_bandwidth(h, residuals.rows());
  const Matrix outer = outer_products(residuals);
  const Matrix loo = smooth(outer, h, ks, true);
  return (loo - outer).squaredNorm();
}

std::vector<double> default_bandwidth_grid() {
  constexpr int n = 15;
  const double lo = std::log(0.02), hi = std::log(0.5);
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = std::exp(lo + (hi - lo) * i / (n - 1));
  return grid;
}

double select_bandwidth(const Matrix& residuals, const KernelSpec& ks,
                        const std::vector<double>& grid) {
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "bandwidth grid is empty");
  for (double h : grid)
    if (!(h > 0.0 && h < 1.0))
      throw Error(ErrorKind::InvalidArgument, "grid bandwidths must lie in (0, 1)");
  double best_h = 0.0, best = std::numeric_limits<double>::infinity();
  for (double h : grid) {
    const double c = cv_objective(residuals, h, ks);
    if (c < best || (c == best && h < best_h)) {
      best = c;
      best_h = h;
    }
  }
  return best_h;
}

VolatilityPath estimate_volatility(const TimeSeriesMatrix& data, int K, const KernelSpec& ks,
                                   const std::vector<double>& grid, bool intercept) {
  const Matrix e = levels_var_residuals(data, K, intercept);
  return kernel_covariance_path(e, select_bandwidth(e, ks, grid), ks);
}

void write_volatility_csv(std::ostream& out, const VolatilityPath& vol) {
  const int p = vol.p();
  out << "t,bandwidth";
  for (int j = 0; j < p; ++j)
    for (int i = j; i < p; ++i) out << ",s" << i + 1 << '_' << j + 1;
  out << '\n' << std::setprecision(12);
  for (int t = 0; t < vol.T(); ++t) {
    out << t + 1 << ',' << vol.bandwidth;
    for (int j = 0; j < p; ++j)
      for (int i = j; i < p; ++i) out << ',' << vol.sigmas[t](i, j);
    out << '\n';
  }
}

}  // namespace acoint
