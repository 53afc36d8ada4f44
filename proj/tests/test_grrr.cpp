#include <doctest.h>

#include <cmath>

#include "acoint/grrr.hpp"
#include "acoint/rrr.hpp"
#include "helpers.hpp"

using namespace acoint;
using testing_support::design_sample;
using testing_support::gaussian_matrix;

namespace {

const double kLog2Pi = std::log(2.0 * M_PI);

// Smooth deterministic covariance path with a rotation and a level shift.
VolatilityPath wavy_path(int T, int p) {
  std::vector<Matrix> s;
  for (int t = 0; t < T; ++t) {
    Matrix m = Matrix::Identity(p, p);
    m(0, 0) = 1.0 + 3.0 * (t > T / 2) + 0.5 * std::sin(0.1 * t);
    if (p > 1) m(0, 1) = m(1, 0) = 0.3 * std::cos(0.05 * t);
    s.push_back(m);
  }
  return VolatilityPath::from_sigmas(s);
}

Matrix ols(const Matrix& w, const Matrix& y) { return w.colPivHouseholderQr().solve(y).transpose(); }

}  // namespace

TEST_CASE("hand-computed adaptive likelihood, T = 3") {
  std::vector<Matrix> s(3, Matrix::Identity(1, 1));
  s[1](0, 0) = 4.0;
  const VolatilityPath v = VolatilityPath::from_sigmas(s);
  Matrix e(3, 1);
  e << 1.0, 2.0, -1.0;
  const double ref = -1.5 * kLog2Pi - 0.5 * std::log(4.0) - 0.5 * 3.0;
  CHECK(adaptive_loglik(e, v) == doctest::Approx(ref).epsilon(1e-14));
  CHECK(weighted_ssr(e, v) == doctest::Approx(3.0));
}

TEST_CASE("identity path with zero residuals") {
  const VolatilityPath v = VolatilityPath::identity(10, 2);
  CHECK(adaptive_loglik(Matrix::Zero(10, 2), v) == doctest::Approx(-10.0 * kLog2Pi));
}

TEST_CASE("identity weighting reduces GLS to OLS") {
  const TimeSeriesMatrix x = design_sample(1, 0.5, Innovation::SingleBreak, 100, 31);
  const LagDesign d = build_lag_design(x, {2, 2, 1, DeterministicCase::RestrictedConstant, 4});
  const VolatilityPath id = VolatilityPath::identity(d.T(), 2);
  std::mt19937_64 rng(31);
  const Matrix beta = gaussian_matrix(3, 1, rng);

  const GlsFit fit = gls_update_given_beta(d, beta, id);
  Matrix w(d.T(), 1 + d.z.cols());
  w << d.x_lag * beta, d.z;
  const Matrix coef = ols(w, d.dy);
  CHECK((fit.alpha - coef.leftCols(1)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((fit.psi - coef.rightCols(d.z.cols())).cwiseAbs().maxCoeff() < 1e-10);

  const GlsFit f0 = gls_update_given_beta(d, Matrix::Zero(3, 0), id);
  CHECK(f0.alpha.cols() == 0);
  CHECK((f0.psi - ols(d.z, d.dy)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("weighted GLS against a stacked-whitening oracle") {
  std::mt19937_64 rng(32);
  const int T = 40, p = 2, m = 3;
  const Matrix w = gaussian_matrix(T, m, rng), y = gaussian_matrix(T, p, rng);
  const VolatilityPath v = wavy_path(T, p);
  // Whiten each equation block: L_t^{-1} y_t = L_t^{-1} (w_t' kron I) vec(B).
  Matrix big(T * p, p * m);
  Vector rhs(T * p);
  for (int t = 0; t < T; ++t) {
    const Matrix li = v.sqrts[t].triangularView<Eigen::Lower>().solve(Matrix::Identity(p, p));
    Matrix xt = Matrix::Zero(p, p * m);
    for (int j = 0; j < m; ++j) xt.block(0, j * p, p, p) = w(t, j) * Matrix::Identity(p, p);
    big.middleRows(t * p, p) = li * xt;
    rhs.segment(t * p, p) = li * y.row(t).transpose();
  }
  const Vector vecb = big.colPivHouseholderQr().solve(rhs);
  const Matrix ref = Eigen::Map<const Matrix>(vecb.data(), p, m);
  CHECK((weighted_gls(w, y, v) - ref).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("each GLS half-step does not lower the likelihood") {
  const TimeSeriesMatrix x = design_sample(1, 0.5, Innovation::StochasticVolatility, 100, 33);
  const LagDesign d = build_lag_design(x, {2, 2, 1, DeterministicCase::None, 4});
  const VolatilityPath v = estimate_volatility(x, 4);
  const Matrix c = default_normalization(2, 1);
  std::mt19937_64 rng(33);
  for (int i = 0; i < 100; ++i) {
    const Matrix beta0 = normalize_beta(gaussian_matrix(2, 1, rng), c);
    const Matrix alpha0 = 0.3 * gaussian_matrix(2, 1, rng);
    const Matrix psi0 = 0.3 * gaussian_matrix(2, 2, rng);
    const Matrix res0 = d.dy - d.x_lag * beta0 * alpha0.transpose() - d.z * psi0.transpose();
    const double l0 = adaptive_loglik(res0, v);

    const GlsFit f = gls_update_given_beta(d, beta0, v);
    CHECK(f.loglik >= l0 - 1e-9);
    const Matrix beta1 = gls_update_given_alpha_psi(d, f.alpha, f.psi, v, c);
    CHECK((c.transpose() * beta1 - Matrix::Identity(1, 1)).norm() < 1e-12);
    const Matrix res1 = d.dy - d.x_lag * beta1 * f.alpha.transpose() - d.z * f.psi.transpose();
    CHECK(adaptive_loglik(res1, v) >= f.loglik - 1e-9);
  }
}

TEST_CASE("switching path is monotone") {
  for (Innovation inn : {Innovation::SingleBreak, Innovation::StochasticVolatility}) {
    const TimeSeriesMatrix x = design_sample(1, 0.5, inn, 50, 34);
    const VolatilityPath v = estimate_volatility(x, 4);
    for (int k = 1; k <= 4; ++k)
      for (DeterministicCase det : {DeterministicCase::None, DeterministicCase::RestrictedTrend}) {
        const VecmSpec spec{2, k, 1, det, 4};
        const GrrrEstimate e = switch_estimate(build_lag_design(x, spec), spec, v);
        CHECK(e.converged);
        CHECK(e.monotonicity_violations == 0);
        for (std::size_t i = 1; i < e.loglik_path.size(); ++i)
          CHECK(e.loglik_path[i] >= e.loglik_path[i - 1] - 1e-9 * std::abs(e.loglik_path[i - 1]));
      }
  }
}

TEST_CASE("identity path matches fixed-covariance RRR") {
  for (int seed = 0; seed < 5; ++seed) {
    const TimeSeriesMatrix x = design_sample(1, 0.5, Innovation::SingleBreak, 100, 35 + seed);
    for (DeterministicCase det : {DeterministicCase::None, DeterministicCase::RestrictedConstant}) {
      const VecmSpec spec{2, 2, 1, det, 4};
      const LagDesign d = build_lag_design(x, spec);
      const VolatilityPath id = VolatilityPath::identity(d.T(), 2);
      const double ref = solve_rrr_fixed_covariance(concentrate(d), 1, Matrix::Identity(2, 2)).loglik;
      const GrrrEstimate e = switch_estimate(d, spec, id);
      CHECK(e.loglik == doctest::Approx(ref).epsilon(1e-6));
    }
  }
}

TEST_CASE("constant covariance path matches fixed-covariance RRR at that covariance") {
  const TimeSeriesMatrix x = design_sample(1, 0.1, Innovation::Homoskedastic, 100, 40);
  const VecmSpec spec{2, 2, 1, DeterministicCase::None, 4};
  const LagDesign d = build_lag_design(x, spec);
  Matrix omega(2, 2);
  omega << 2.0, 0.6, 0.6, 0.5;
  const VolatilityPath v = VolatilityPath::from_sigmas(std::vector<Matrix>(d.T(), omega));
  const double ref = solve_rrr_fixed_covariance(concentrate(d), 1, omega).loglik;
  CHECK(switch_estimate(d, spec, v).loglik == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("fixed-covariance RRR is a fixed point of identity switching") {
  const TimeSeriesMatrix x = design_sample(1, 0.0, Innovation::Homoskedastic, 100, 41);
  const VecmSpec spec{2, 1, 1, DeterministicCase::None, 4};
  const LagDesign d = build_lag_design(x, spec);
  const VolatilityPath id = VolatilityPath::identity(d.T(), 2);
  const RrrEstimate r = solve_rrr_fixed_covariance(concentrate(d), 1, Matrix::Identity(2, 2));
  const GlsFit f = gls_update_given_beta(d, r.beta_aug, id);
  const Matrix b = gls_update_given_alpha_psi(d, f.alpha, f.psi, id, default_normalization(2, 1));
  const GlsFit f2 = gls_update_given_beta(d, b, id);
  CHECK(f.loglik == doctest::Approx(r.loglik).epsilon(1e-8));
  CHECK(f2.loglik == doctest::Approx(r.loglik).epsilon(1e-8));
}

TEST_CASE("rank 0 and full rank are single GLS problems") {
  const TimeSeriesMatrix x = design_sample(2, 0.5, Innovation::SingleBreak, 80, 42);
  const VolatilityPath v = estimate_volatility(x, 4);
  const VecmSpec sp{2, 2, 2, DeterministicCase::None, 4};
  const LagDesign d = build_lag_design(x, sp);
  const GrrrEstimate full = switch_estimate(d, sp, v);
  Matrix w(d.T(), 2 + d.z.cols());
  w << d.x_lag, d.z;
  const Matrix coef = weighted_gls(w, d.dy, v);
  CHECK(full.loglik == doctest::Approx(adaptive_loglik(d.dy - w * coef.transpose(), v)).epsilon(1e-12));
  CHECK((full.pi_aug - coef.leftCols(2)).cwiseAbs().maxCoeff() < 1e-9);

  const VecmSpec s0{2, 2, 0, DeterministicCase::None, 4};
  const GrrrEstimate zero = switch_estimate(d, s0, v);
  const Matrix c0 = weighted_gls(d.z, d.dy, v);
  CHECK(zero.loglik == doctest::Approx(adaptive_loglik(d.dy - d.z * c0.transpose(), v)).epsilon(1e-12));

  // Identity weighting at full rank: the OLS likelihood at Sigma = I.
  const VolatilityPath id = VolatilityPath::identity(d.T(), 2);
  const Matrix o = ols(w, d.dy);
  CHECK(switch_estimate(d, sp, id).loglik ==
        doctest::Approx(adaptive_loglik(d.dy - w * o.transpose(), id)).epsilon(1e-12));
}

TEST_CASE("cointegrating vector is recovered under a volatility break") {
  const TimeSeriesMatrix x = design_sample(1, 0.0, Innovation::SingleBreak, 1000, 43);
  const VolatilityPath v = estimate_volatility(x, 4);
  const VecmSpec spec{2, 1, 1, DeterministicCase::None, 4};
  const GrrrEstimate e = switch_estimate(build_lag_design(x, spec), spec, v);
  CHECK(e.beta_aug(0, 0) == doctest::Approx(1.0));
  CHECK(std::abs(e.beta_aug(1, 0)) < 0.05);
}

TEST_CASE("likelihood is nested in r at fixed k") {
  const TimeSeriesMatrix x = design_sample(1, 0.5, Innovation::StochasticVolatility, 100, 44);
  const VolatilityPath v = estimate_volatility(x, 4);
  for (int k = 1; k <= 4; ++k) {
    double prev = -std::numeric_limits<double>::infinity();
    for (int r = 0; r <= 2; ++r) {
      const VecmSpec spec{2, k, r, DeterministicCase::None, 4};
      const double l = switch_estimate(build_lag_design(x, spec), spec, v).loglik;
      CHECK(l >= prev - 1e-8 * std::abs(l));
      prev = l;
    }
  }
}
