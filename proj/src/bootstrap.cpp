#include "acoint/bootstrap.hpp"

#include <cmath>
#include <limits>

#include "acoint/parallel.hpp"
#include "acoint/rng.hpp"

namespace acoint {

const char* to_string(BootstrapKind k) {
  switch (k) {
    case BootstrapKind::VarianceBootstrap: return "variance";
    case BootstrapKind::WildBootstrap: return "wild";
    case BootstrapKind::NonAdaptiveWild: return "nonadaptive-wild";
  }
  return "?";
}

BootstrapKind parse_bootstrap_kind(const std::string& name) {
  if (name == "variance" || name == "ALR-VB") return BootstrapKind::VarianceBootstrap;
  if (name == "wild" || name == "ALR-WB") return BootstrapKind::WildBootstrap;
  if (name == "nonadaptive-wild" || name == "PLR-WB") return BootstrapKind::NonAdaptiveWild;
  throw Error(ErrorKind::InvalidArgument, "unknown bootstrap scheme '" + name + "'");
}

const char* to_string(Multiplier m) { return m == Multiplier::Gaussian ? "gaussian" : "rademacher"; }

Multiplier parse_multiplier(const std::string& name) {
  if (name == "gaussian") return Multiplier::Gaussian;
  if (name == "rademacher") return Multiplier::Rademacher;
  throw Error(ErrorKind::InvalidArgument, "unknown wild multiplier '" + name + "'");
}

void BootstrapScheme::validate() const {
  if (B < 1) throw Error(ErrorKind::InvalidArgument, "bootstrap needs B >= 1");
}

std::string BootstrapScheme::label() const {
  switch (kind) {
    case BootstrapKind::VarianceBootstrap: return "ALR-VB";
    case BootstrapKind::WildBootstrap: return "ALR-WB";
    case BootstrapKind::NonAdaptiveWild: return "PLR-WB";
  }
  return "?";
}

PlrStatistic plr_statistic(const LagDesign& design, int r, const VolatilityPath& vol,
                           const GrrrOptions& options) {
  const int p = design.p;
  if (r < 0 || r > p) throw Error(ErrorKind::InvalidArgument, "rank out of range");
  PlrStatistic out;
  if (r == p) return out;
  const VecmSpec full{p, design.k, p, design.det, design.k};
  VecmSpec restricted = full;
  restricted.r = r;
  const GrrrEstimate er = switch_estimate(design, restricted, vol, std::nullopt, options);
  const GrrrEstimate ep = switch_estimate(design, full, vol, std::nullopt, options);
  out.q = -2.0 * (er.loglik - ep.loglik);
  out.q_quadratic = weighted_ssr(er.residuals, vol) - weighted_ssr(ep.residuals, vol);
  out.converged = er.converged && ep.converged;
  return out;
}

Matrix draw_bootstrap_errors(const BootstrapScheme& scheme, const Matrix& residuals,
                             const VolatilityPath* vol, std::mt19937_64& rng) {
  const Eigen::Index T = residuals.rows(), p = residuals.cols();
  Matrix e(T, p);
  std::normal_distribution<double> nd;
  if (scheme.kind == BootstrapKind::VarianceBootstrap) {
    if (!vol || vol->T() != T || vol->p() != p)
      throw Error(ErrorKind::DimensionMismatch, "variance bootstrap needs a matching volatility path");
    Vector z(p);
    for (Eigen::Index t = 0; t < T; ++t) {
      for (Eigen::Index i = 0; i < p; ++i) z(i) = nd(rng);
      e.row(t) = (vol->sqrts[static_cast<std::size_t>(t)] * z).transpose();
    }
    return e;
  }
  std::bernoulli_distribution coin;
  for (Eigen::Index t = 0; t < T; ++t) {
    const double w = scheme.multiplier == Multiplier::Gaussian ? nd(rng) : (coin(rng) ? 1.0 : -1.0);
    e.row(t) = w * residuals.row(t);
  }
  return e;
}

TimeSeriesMatrix generate_bootstrap_sample(const RrrEstimate& fit, const VecmSpec& spec,
                                           const Matrix& errors, const TimeSeriesMatrix& data) {
  if (errors.rows() != data.T() || errors.cols() != data.p())
    throw Error(ErrorKind::DimensionMismatch, "bootstrap errors must be T x p");
  TimeSeriesMatrix sim = simulate_vecm(fit.params, spec, errors, data.presample());
  return TimeSeriesMatrix(sim.values(), sim.presample(), data.names());
}

TimeSeriesMatrix generate_bootstrap_sample(const RrrEstimate& fit, const VecmSpec& spec,
                                           const BootstrapScheme& scheme, const VolatilityPath* vol,
                                           const TimeSeriesMatrix& data, int b) {
  std::mt19937_64 rng = make_stream(scheme.seed, static_cast<std::uint64_t>(spec.r),
                                    static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(spec.k));
  return generate_bootstrap_sample(fit, spec, draw_bootstrap_errors(scheme, fit.residuals, vol, rng),
                                   data);
}

namespace {

double statistic_on(const TimeSeriesMatrix& data, const VecmSpec& spec, BootstrapKind kind,
                    const VolatilityPath* vol, const GrrrOptions& options) {
  const LagDesign design = build_lag_design(data, spec);
  if (kind == BootstrapKind::NonAdaptiveWild) return trace_statistic(concentrate(design), spec.r);
  return plr_statistic(design, spec.r, *vol, options).q;
}

}  // namespace

PlrOutcome bootstrap_pvalue(const TimeSeriesMatrix& data, int k, int r, DeterministicCase det,
                            const VolatilityPath* vol, const BootstrapScheme& scheme,
                            const GrrrOptions& options) {
  scheme.validate();
  const bool adaptive = scheme.kind != BootstrapKind::NonAdaptiveWild;
  if (adaptive && !vol) throw Error(ErrorKind::InvalidArgument, "adaptive bootstrap needs a volatility path");
  const VecmSpec spec{data.p(), k, r, det, k};
  spec.validate();

  PlrOutcome out;
  out.r = r;
  out.k = k;
  out.scheme = scheme;
  out.statistic = statistic_on(data, spec, scheme.kind, vol, options);

  const RrrEstimate fit = solve_rrr(concentrate(build_lag_design(data, spec)), r);
  out.boot_stats.assign(static_cast<std::size_t>(scheme.B), std::numeric_limits<double>::quiet_NaN());
  parallel_for(static_cast<std::size_t>(scheme.B), [&](std::size_t b) {
    try {
      const TimeSeriesMatrix star =
          generate_bootstrap_sample(fit, spec, scheme, vol, data, static_cast<int>(b));
      out.boot_stats[b] = statistic_on(star, spec, scheme.kind, vol, options);
    } catch (const Error&) {
    }
  });

  int exceed = 0, used = 0;
  for (double q : out.boot_stats) {
    if (!std::isfinite(q)) continue;
    ++used;
    if (q >= out.statistic) ++exceed;
  }
  out.dropped = scheme.B - used;
  out.pvalue = (1.0 + exceed) / (used + 1.0);
  if (out.dropped > 0.05 * scheme.B)
    out.warning = std::to_string(out.dropped) + " of " + std::to_string(scheme.B) +
                  " bootstrap replicates failed and were dropped";
  return out;
}

RankTestPath sequential_rank(const TimeSeriesMatrix& data, int k, DeterministicCase det,
                             const VolatilityPath* vol, const BootstrapScheme& scheme, double eta,
                             const GrrrOptions& options) {
  if (!(eta > 0.0 && eta < 1.0)) throw Error(ErrorKind::InvalidArgument, "eta must lie in (0, 1)");
  RankTestPath path;
  path.k = k;
  path.eta = eta;
  path.r_hat = data.p();
  for (int r = 0; r < data.p(); ++r) {
    path.outcomes.push_back(bootstrap_pvalue(data, k, r, det, vol, scheme, options));
    if (path.outcomes.back().pvalue > eta) {
      path.r_hat = r;
      break;
    }
  }
  return path;
}

RankTestPath nonadaptive_wild_plr(const TimeSeriesMatrix& data, int k, DeterministicCase det,
                                  double eta, int B, std::uint64_t seed, Multiplier multiplier) {
  BootstrapScheme scheme{BootstrapKind::NonAdaptiveWild, B, seed, multiplier};
  return sequential_rank(data, k, det, nullptr, scheme, eta);
}

}  // namespace acoint
