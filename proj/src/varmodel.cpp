#include "acoint/varmodel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace acoint {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::SampleTooSmall: return "sample-too-small";
    case ErrorKind::RankDeficient: return "rank-deficient";
    case ErrorKind::NotPositiveDefinite: return "not-positive-definite";
    case ErrorKind::ZeroKernelWeights: return "zero-kernel-weights";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

const char* to_string(DeterministicCase det) {
  switch (det) {
    case DeterministicCase::None: return "none";
    case DeterministicCase::RestrictedConstant: return "restricted-constant";
    case DeterministicCase::RestrictedTrend: return "restricted-trend";
  }
  return "none";
}

DeterministicCase parse_deterministic(const std::string& name) {
  if (name == "none" || name == "i") return DeterministicCase::None;
  if (name == "restricted-constant" || name == "constant" || name == "ii")
    return DeterministicCase::RestrictedConstant;
  if (name == "restricted-trend" || name == "trend" || name == "iii")
    return DeterministicCase::RestrictedTrend;
  throw Error(ErrorKind::InvalidArgument,
              "unknown deterministic case '" + name + "'");
}

int restricted_dim(DeterministicCase det) {
  return det == DeterministicCase::None ? 0 : 1;
}

int unrestricted_dim(DeterministicCase det) {
  return det == DeterministicCase::RestrictedTrend ? 1 : 0;
}

TimeSeriesMatrix::TimeSeriesMatrix(Matrix values, Matrix presample,
                                   std::vector<std::string> names)
    : values_(std::move(values)),
      presample_(std::move(presample)),
      names_(std::move(names)) {
  if (values_.cols() < 1)
    throw Error(ErrorKind::DimensionMismatch, "series must have p >= 1");
  if (presample_.size() > 0 && presample_.cols() != values_.cols())
    throw Error(ErrorKind::DimensionMismatch,
                "presample and values have different column counts");
  if (presample_.size() == 0) presample_.resize(0, values_.cols());
  if (!values_.allFinite() || !presample_.allFinite())
    throw Error(ErrorKind::InvalidArgument, "series contains non-finite values");
  if (!names_.empty() && static_cast<int>(names_.size()) != values_.cols())
    throw Error(ErrorKind::DimensionMismatch,
                "number of series names does not match p");
}

Eigen::RowVectorXd TimeSeriesMatrix::level(int t) const {
  if (t >= 1) return values_.row(t - 1);
  const int row = presample_rows() - 1 + t;
  if (row < 0)
    throw Error(ErrorKind::InvalidArgument,
                "requested initial value beyond the stored presample");
  return presample_.row(row);
}

TimeSeriesMatrix TimeSeriesMatrix::from_observations(
    const Matrix& all, int n_presample, std::vector<std::string> names) {
  if (n_presample < 0 || n_presample >= all.rows())
    throw Error(ErrorKind::SampleTooSmall,
                "not enough observations for the requested presample");
  return TimeSeriesMatrix(all.bottomRows(all.rows() - n_presample),
                          all.topRows(n_presample), std::move(names));
}

void VecmSpec::validate() const {
  if (p < 1) throw Error(ErrorKind::InvalidArgument, "p must be >= 1");
  if (K < 1 || k < 1 || k > K)
    throw Error(ErrorKind::InvalidArgument, "lag order must satisfy 1 <= k <= K");
  if (r < 0 || r > p)
    throw Error(ErrorKind::InvalidArgument, "rank must satisfy 0 <= r <= p");
}

VecmParams VecmParams::zeros(const VecmSpec& spec) {
  VecmParams out;
  out.alpha = Matrix::Zero(spec.p, spec.r);
  out.beta = Matrix::Zero(spec.p, spec.r);
  out.gamma.assign(spec.k - 1, Matrix::Zero(spec.p, spec.p));
  out.rho = Matrix::Zero(restricted_dim(spec.det), spec.r);
  out.phi = Matrix::Zero(spec.p, unrestricted_dim(spec.det));
  return out;
}

Matrix VecmParams::beta_augmented() const {
  Matrix out(beta.rows() + rho.rows(), beta.cols());
  out << beta, rho;
  return out;
}

Matrix VecmParams::psi() const {
  const Eigen::Index p = alpha.rows();
  Matrix out(p, p * static_cast<Eigen::Index>(gamma.size()) + phi.cols());
  for (std::size_t i = 0; i < gamma.size(); ++i)
    out.middleCols(static_cast<Eigen::Index>(i) * p, p) = gamma[i];
  out.rightCols(phi.cols()) = phi;
  return out;
}

Matrix VecmParams::pi_augmented() const {
  return alpha * beta_augmented().transpose();
}

VecmParams VecmParams::from_blocks(const VecmSpec& spec, const Matrix& alpha,
                                   const Matrix& beta_aug, const Matrix& psi) {
  VecmParams out;
  out.alpha = alpha;
  out.beta = beta_aug.topRows(spec.p);
  out.rho = beta_aug.bottomRows(restricted_dim(spec.det));
  out.gamma.resize(spec.k - 1);
  for (int i = 0; i < spec.k - 1; ++i)
    out.gamma[i] = psi.middleCols(i * spec.p, spec.p);
  out.phi = psi.rightCols(unrestricted_dim(spec.det));
  return out;
}

void VecmParams::check(const VecmSpec& spec) const {
  const auto bad = [](const std::string& what) {
    throw Error(ErrorKind::DimensionMismatch, "VecmParams: " + what);
  };
  if (alpha.rows() != spec.p || alpha.cols() != spec.r) bad("alpha must be p x r");
  if (beta.rows() != spec.p || beta.cols() != spec.r) bad("beta must be p x r");
  if (rho.rows() != restricted_dim(spec.det) || rho.cols() != spec.r)
    bad("rho must be dim(D) x r");
  if (phi.rows() != spec.p || phi.cols() != unrestricted_dim(spec.det))
    bad("phi must be p x dim(d)");
  if (static_cast<int>(gamma.size()) != spec.k - 1) bad("need k-1 Gamma matrices");
  for (const auto& g : gamma)
    if (g.rows() != spec.p || g.cols() != spec.p) bad("Gamma_i must be p x p");
}

int minimum_sample(int p, int K) { return p * (K + 1) + 10; }

LagDesign build_lag_design(const TimeSeriesMatrix& data, const VecmSpec& spec) {
  spec.validate();
  if (data.p() != spec.p)
    throw Error(ErrorKind::DimensionMismatch,
                "data has p=" + std::to_string(data.p()) + " but spec has p=" +
                    std::to_string(spec.p));
  if (data.presample_rows() < spec.k)
    throw Error(ErrorKind::SampleTooSmall,
                "lag " + std::to_string(spec.k) + " needs " +
                    std::to_string(spec.k) + " initial values, have " +
                    std::to_string(data.presample_rows()));
  if (data.T() < minimum_sample(spec.p, spec.K))
    throw Error(ErrorKind::SampleTooSmall,
                "T=" + std::to_string(data.T()) + " is below the minimum " +
                    std::to_string(minimum_sample(spec.p, spec.K)));

  const int T = data.T();
  const int p = spec.p;
  const int n_pre = data.presample_rows();
  // Stack presample and values so that X_t sits at row t + n_pre - 1.
  Matrix levels(n_pre + T, p);
  levels << data.presample(), data.values();
  const auto X = [&](int t) { return levels.row(t + n_pre - 1); };

  LagDesign d;
  d.p = p;
  d.k = spec.k;
  d.det = spec.det;
  d.dy.resize(T, p);
  d.x_lag.resize(T, spec.p1());
  d.z.resize(T, spec.z_cols());
  d.t_index.resize(T);
  for (int t = 1; t <= T; ++t) {
    const int row = t - 1;
    d.t_index[row] = t;
    d.dy.row(row) = X(t) - X(t - 1);
    d.x_lag.row(row).head(p) = X(t - 1);
    if (spec.det == DeterministicCase::RestrictedConstant) d.x_lag(row, p) = 1.0;
    if (spec.det == DeterministicCase::RestrictedTrend) d.x_lag(row, p) = t;
    for (int i = 1; i < spec.k; ++i)
      d.z.row(row).segment((i - 1) * p, p) = X(t - i) - X(t - i - 1);
    if (spec.det == DeterministicCase::RestrictedTrend)
      d.z(row, spec.z_cols() - 1) = 1.0;
  }
  return d;
}

TimeSeriesMatrix simulate_vecm(const VecmParams& params, const VecmSpec& spec,
                               const Matrix& innovations,
                               const Matrix& presample) {
  spec.validate();
  params.check(spec);
  if (innovations.cols() != spec.p || presample.cols() != spec.p)
    throw Error(ErrorKind::DimensionMismatch,
                "innovations/presample must have p columns");
  if (presample.rows() < spec.k)
    throw Error(ErrorKind::SampleTooSmall, "presample shorter than k");

  const int T = static_cast<int>(innovations.rows());
  const int p = spec.p;
  const int n_pre = static_cast<int>(presample.rows());
  Matrix levels(n_pre + T, p);
  levels.topRows(n_pre) = presample;

  const Matrix pi = params.alpha * params.beta.transpose();
  const Matrix drift_load = params.alpha * params.rho.transpose();
  for (int t = 1; t <= T; ++t) {
    const int row = t + n_pre - 1;
    const Vector prev = levels.row(row - 1).transpose();
    Vector dx = pi * prev + innovations.row(t - 1).transpose();
    if (spec.det == DeterministicCase::RestrictedConstant)
      dx += drift_load.col(0);
    if (spec.det == DeterministicCase::RestrictedTrend) {
      dx += drift_load.col(0) * static_cast<double>(t);
      dx += params.phi.col(0);
    }
    for (int i = 1; i < spec.k; ++i) {
      const Vector lagged_diff =
          (levels.row(row - i) - levels.row(row - i - 1)).transpose();
      dx += params.gamma[i - 1] * lagged_diff;
    }
    levels.row(row) = prev.transpose() + dx.transpose();
  }
  return TimeSeriesMatrix(levels.bottomRows(T), presample);
}

Matrix vecm_residuals(const LagDesign& design, const VecmParams& params) {
  Matrix fitted = design.x_lag * params.pi_augmented().transpose();
  if (design.z.cols() > 0) fitted += design.z * params.psi().transpose();
  return design.dy - fitted;
}

std::vector<Matrix> levels_coefficients(const VecmParams& params, int k) {
  const Eigen::Index p = params.alpha.rows();
  const Matrix I = Matrix::Identity(p, p);
  const Matrix pi = params.alpha * params.beta.transpose();
  std::vector<Matrix> A(k, Matrix::Zero(p, p));
  A[0] = I + pi + (k > 1 ? params.gamma[0] : Matrix::Zero(p, p));
  for (int i = 2; i <= k - 1; ++i) A[i - 1] = params.gamma[i - 1] - params.gamma[i - 2];
  if (k > 1) A[k - 1] = -params.gamma[k - 2];
  return A;
}

namespace {

int numerical_rank(const Matrix& m) {
  if (m.cols() == 0 || m.rows() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s(0));
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-10 * scale) ++rank;
  return rank;
}

}  // namespace

I1Report check_i1_conditions(const VecmParams& params, const VecmSpec& spec,
                             double tol) {
  spec.validate();
  params.check(spec);
  const int p = spec.p;
  const int k = spec.k;
  const auto A = levels_coefficients(params, k);

  Matrix companion = Matrix::Zero(p * k, p * k);
  for (int i = 0; i < k; ++i) companion.block(0, i * p, p, p) = A[i];
  if (k > 1) companion.bottomLeftCorner(p * (k - 1), p * (k - 1)).setIdentity();

  Eigen::EigenSolver<Matrix> es(companion, false);
  I1Report rep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const std::complex<double> lambda = es.eigenvalues()(i);
    const double modulus = std::abs(lambda);
    rep.companion_moduli.push_back(modulus);
    if (std::abs(lambda - 1.0) <= tol)
      ++rep.unit_root_count;
    else
      rep.max_other_root_modulus = std::max(rep.max_other_root_modulus, modulus);
  }
  std::sort(rep.companion_moduli.rbegin(), rep.companion_moduli.rend());
  rep.roots_ok = rep.unit_root_count == p - spec.r &&
                 rep.max_other_root_modulus < 1.0 - tol;
  rep.alpha_rank = numerical_rank(params.alpha);
  rep.beta_rank = numerical_rank(params.beta);
  rep.rank_ok = rep.alpha_rank == spec.r && rep.beta_rank == spec.r;
  return rep;
}

}  // namespace acoint
