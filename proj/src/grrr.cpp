#include "acoint/grrr.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "acoint/rrr.hpp"

namespace acoint {

namespace {

Vector solve_spd(const Matrix& gram, const Vector& rhs, const char* what) {
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() == Eigen::Success) return llt.solve(rhs);
  Eigen::LDLT<Matrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-14)
    throw Error(ErrorKind::RankDeficient, std::string(what) + " normal equations are singular");
  return ldlt.solve(rhs);
}

struct Normalisation {
  Matrix c_bar;   // c (c'c)^{-1}
  Matrix c_perp;  // p1 x (p1 - r), orthonormal, c' c_perp = 0
};

Normalisation make_normalisation(const Matrix& c) {
  Normalisation n;
  const Matrix ctc = c.transpose() * c;
  n.c_bar = c * ctc.inverse();
  Eigen::HouseholderQR<Matrix> qr(c);
  const Matrix q = qr.householderQ() * Matrix::Identity(c.rows(), c.rows());
  n.c_perp = q.rightCols(c.rows() - c.cols());
  return n;
}

GlsFit fit_at_beta(const LagDesign& d, const Matrix& beta_aug, const VolatilityPath& vol) {
  const int r = static_cast<int>(beta_aug.cols());
  const int zc = static_cast<int>(d.z.cols());
  Matrix w(d.T(), r + zc);
  if (r > 0) w.leftCols(r) = d.x_lag * beta_aug;
  if (zc > 0) w.rightCols(zc) = d.z;
  GlsFit fit;
  if (w.cols() == 0) {
    fit.alpha.resize(d.p, 0);
    fit.psi.resize(d.p, 0);
    fit.residuals = d.dy;
  } else {
    const Matrix b = weighted_gls(w, d.dy, vol);
    fit.alpha = b.leftCols(r);
    fit.psi = b.rightCols(zc);
    fit.residuals = d.dy - w * b.transpose();
  }
  fit.loglik = adaptive_loglik(fit.residuals, vol);
  return fit;
}

struct Run {
  Matrix beta;
  GlsFit fit;
  int iterations = 0;
  bool converged = false;
  double rel_change = 0.0;
  int violations = 0;
  std::vector<double> path;
};

Run iterate(const LagDesign& d, Matrix beta, const VolatilityPath& vol, const Matrix& c,
            const GrrrOptions& opt) {
  Run run;
  run.beta = std::move(beta);
  run.fit = fit_at_beta(d, run.beta, vol);
  run.path.push_back(run.fit.loglik);
  for (int it = 1; it <= opt.max_iter; ++it) {
    const double prev = run.fit.loglik;
    Matrix next_beta = gls_update_given_alpha_psi(d, run.fit.alpha, run.fit.psi, vol, c);
    GlsFit next = fit_at_beta(d, next_beta, vol);
    run.iterations = it;
    if (next.loglik < prev - 1e-10 * std::max(1.0, std::abs(prev))) ++run.violations;
    run.rel_change = std::abs(next.loglik - prev) / std::max(1.0, std::abs(prev));
    run.beta = std::move(next_beta);
    run.fit = std::move(next);
    run.path.push_back(run.fit.loglik);
    if (run.rel_change < opt.tol) {
      run.converged = true;
      break;
    }
  }
  return run;
}

Matrix random_beta(int p1, int r, std::mt19937_64& rng, const Matrix& c) {
  std::normal_distribution<double> nd;
  Matrix g(p1, r);
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = nd(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ() * Matrix::Identity(p1, r);
  return normalize_beta(q, c);
}

}  // namespace

double weighted_ssr(const Matrix& residuals, const VolatilityPath& vol) {
  if (residuals.rows() != vol.T() || residuals.cols() != vol.p())
    throw Error(ErrorKind::DimensionMismatch, "residuals do not match the volatility path");
  double s = 0.0;
  for (int t = 0; t < vol.T(); ++t) {
    const Vector e = residuals.row(t).transpose();
    s += e.dot(vol.inverses[t] * e);
  }
  return s;
}

double adaptive_loglik(const Matrix& residuals, const VolatilityPath& vol) {
  const double T = vol.T(), p = vol.p();
  return -0.5 * T * p * std::log(2.0 * std::numbers::pi) - 0.5 * vol.sum_log_det() -
         0.5 * weighted_ssr(residuals, vol);
}

double adaptive_loglik(const LagDesign& design, const VecmParams& params,
                       const VolatilityPath& vol) {
  return adaptive_loglik(vecm_residuals(design, params), vol);
}

Matrix weighted_gls(const Matrix& w, const Matrix& y, const VolatilityPath& vol) {
  const int T = static_cast<int>(w.rows());
  const int m = static_cast<int>(w.cols());
  const int p = static_cast<int>(y.cols());
  if (y.rows() != T || vol.T() != T || vol.p() != p)
    throw Error(ErrorKind::DimensionMismatch, "weighted_gls: inconsistent dimensions");
  const int n = p * m;
  Matrix gram = Matrix::Zero(n, n);
  Vector rhs = Vector::Zero(n);
  for (int t = 0; t < T; ++t) {
    const Matrix& s = vol.inverses[t];
    const Vector sy = s * y.row(t).transpose();
    for (int i = 0; i < m; ++i) {
      const double wi = w(t, i);
      rhs.segment(p * i, p) += wi * sy;
      for (int j = 0; j <= i; ++j) gram.block(p * i, p * j, p, p) += (wi * w(t, j)) * s;
    }
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < i; ++j) gram.block(p * j, p * i, p, p) = gram.block(p * i, p * j, p, p).transpose();
  const Vector theta = solve_spd(gram, rhs, "GLS");
  return Eigen::Map<const Matrix>(theta.data(), p, m);
}

GlsFit gls_update_given_beta(const LagDesign& design, const Matrix& beta_aug,
                             const VolatilityPath& vol) {
  if (beta_aug.rows() != design.p1())
    throw Error(ErrorKind::DimensionMismatch, "beta~ must have p1 rows");
  return fit_at_beta(design, beta_aug, vol);
}

Matrix gls_update_given_alpha_psi(const LagDesign& design, const Matrix& alpha,
                                  const Matrix& psi, const VolatilityPath& vol,
                                  const Matrix& c) {
  const int p = design.p, p1 = design.p1(), T = design.T();
  const int r = static_cast<int>(alpha.cols());
  if (alpha.rows() != p || c.rows() != p1 || c.cols() != r || psi.cols() != design.z.cols())
    throw Error(ErrorKind::DimensionMismatch, "beta update: inconsistent dimensions");
  const Normalisation nm = make_normalisation(c);
  const int q = p1 - r;
  if (r == 0 || q == 0) return nm.c_bar;

  Matrix target = design.dy - design.x_lag * nm.c_bar * alpha.transpose();
  if (psi.cols() > 0) target -= design.z * psi.transpose();
  const Matrix y = design.x_lag * nm.c_perp;  // T x q

  const int n = r * q;
  Matrix gram = Matrix::Zero(n, n);
  Vector rhs = Vector::Zero(n);
  for (int t = 0; t < T; ++t) {
    const Matrix sa = vol.inverses[t] * alpha;          // p x r
    const Matrix asa = alpha.transpose() * sa;          // r x r
    const Vector ast = sa.transpose() * target.row(t).transpose();
    for (int i = 0; i < q; ++i) {
      const double yi = y(t, i);
      rhs.segment(r * i, r) += yi * ast;
      for (int j = 0; j <= i; ++j) gram.block(r * i, r * j, r, r) += (yi * y(t, j)) * asa;
    }
  }
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < i; ++j) gram.block(r * j, r * i, r, r) = gram.block(r * i, r * j, r, r).transpose();
  const Vector theta = solve_spd(gram, rhs, "beta update");
  const Matrix phi_t = Eigen::Map<const Matrix>(theta.data(), r, q);  // Phi'
  return nm.c_bar + nm.c_perp * phi_t.transpose();
}

GrrrEstimate switch_estimate(const LagDesign& design, const VecmSpec& spec,
                             const VolatilityPath& vol,
                             const std::optional<VecmParams>& init,
                             const GrrrOptions& options) {
  spec.validate();
  if (spec.p != design.p || spec.k != design.k || spec.det != design.det)
    throw Error(ErrorKind::DimensionMismatch, "spec does not match the lag design");
  if (vol.T() != design.T() || vol.p() != design.p)
    throw Error(ErrorKind::DimensionMismatch, "volatility path does not match the sample");
  const int p = spec.p, p1 = design.p1(), r = spec.r;

  GrrrEstimate est;
  if (r == 0 || r == p) {
    GlsFit fit;
    if (r == 0) {
      fit = fit_at_beta(design, Matrix(p1, 0), vol);
      est.beta_aug.resize(p1, 0);
      est.pi_aug = Matrix::Zero(p, p1);
    } else {
      Matrix w(design.T(), p1 + design.z.cols());
      w << design.x_lag, design.z;
      const Matrix b = weighted_gls(w, design.dy, vol);
      est.pi_aug = b.leftCols(p1);
      fit.psi = b.rightCols(design.z.cols());
      fit.residuals = design.dy - w * b.transpose();
      fit.loglik = adaptive_loglik(fit.residuals, vol);
      fit.alpha = est.pi_aug.leftCols(p);
      Matrix beta_aug = Matrix::Identity(p1, p);
      if (p1 > p)
        beta_aug.bottomRows(p1 - p) =
            (fit.alpha.completeOrthogonalDecomposition().solve(est.pi_aug.rightCols(p1 - p)))
                .transpose();
      est.beta_aug = beta_aug;
    }
    est.params = VecmParams::from_blocks(spec, fit.alpha, est.beta_aug, fit.psi);
    est.psi = fit.psi;
    est.loglik = fit.loglik;
    est.residuals = std::move(fit.residuals);
    est.converged = true;
    est.loglik_path = {est.loglik};
    return est;
  }

  const Matrix c = options.c ? *options.c : default_normalization(p1, r);
  if (c.rows() != p1 || c.cols() != r)
    throw Error(ErrorKind::DimensionMismatch, "normalisation matrix must be p1 x r");

  Matrix beta0;
  if (init) {
    beta0 = normalize_beta(init->beta_augmented(), c);
  } else {
    beta0 = solve_rrr(concentrate(design), r, c).beta_aug;
  }

  Run best = iterate(design, beta0, vol, c, options);
  int starts = 1;
  if (!best.converged) {
    std::mt19937_64 rng(options.seed);
    for (int s = 0; s < options.extra_starts; ++s) {
      Run alt;
      try {
        alt = iterate(design, random_beta(p1, r, rng, c), vol, c, options);
      } catch (const Error&) {
        continue;
      }
      ++starts;
      if (alt.fit.loglik > best.fit.loglik) best = std::move(alt);
    }
  }

  est.beta_aug = best.beta;
  est.pi_aug = best.fit.alpha * best.beta.transpose();
  est.psi = best.fit.psi;
  est.params = VecmParams::from_blocks(spec, best.fit.alpha, best.beta, best.fit.psi);
  est.loglik = best.fit.loglik;
  est.residuals = std::move(best.fit.residuals);
  est.iterations = best.iterations;
  est.converged = best.converged;
  est.gradient_norm = best.rel_change;
  est.monotonicity_violations = best.violations;
  est.starts_used = starts;
  est.loglik_path = std::move(best.path);
  return est;
}

}  // namespace acoint
