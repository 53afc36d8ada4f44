#include "acoint/montecarlo.hpp"

#include <cmath>

#include "acoint/parallel.hpp"
#include "acoint/rng.hpp"

namespace acoint {

const char* to_string(Innovation i) {
  switch (i) {
    case Innovation::Homoskedastic: return "homoskedastic";
    case Innovation::StochasticVolatility: return "sv";
    case Innovation::SingleBreak: return "break";
  }
  return "?";
}

Innovation parse_innovation(const std::string& name) {
  if (name == "homoskedastic" || name == "iid") return Innovation::Homoskedastic;
  if (name == "sv" || name == "stochastic-volatility") return Innovation::StochasticVolatility;
  if (name == "break" || name == "single-break") return Innovation::SingleBreak;
  throw Error(ErrorKind::InvalidArgument, "unknown innovation process '" + name + "'");
}

DgpSpec DgpSpec::for_rank(int r0, double gamma, Innovation innovation, int T) {
  if (r0 < 0 || r0 > 2) throw Error(ErrorKind::InvalidArgument, "r0 must be 0, 1 or 2");
  DgpSpec d;
  d.a = r0 >= 1 ? -0.4 : 0.0;
  d.b = r0 == 2 ? -0.4 : 0.0;
  d.gamma = gamma;
  d.innovation = innovation;
  d.T = T;
  return d;
}

int DgpSpec::r0() const { return (a != 0.0 ? 1 : 0) + (b != 0.0 ? 1 : 0); }

void DgpSpec::validate() const {
  if (!(a > -2.0 && a <= 0.0 && b > -2.0 && b <= 0.0 && gamma >= 0.0 && gamma < 1.0))
    throw Error(ErrorKind::InvalidArgument, "(a, b, gamma) must lie in (-2, 0]^2 x [0, 1)");
  if (T < minimum_sample(2, K)) throw Error(ErrorKind::SampleTooSmall, "T too small for K");
  if (K < 2) throw Error(ErrorKind::InvalidArgument, "K must be at least 2 for the VAR(2) design");
  if (reps < 1) throw Error(ErrorKind::InvalidArgument, "reps must be >= 1");
  if (sv_sigma_xi < 0.0 || std::abs(sv_lambda) >= 1.0)
    throw Error(ErrorKind::InvalidArgument, "SV parameters need |lambda| < 1 and sigma_xi >= 0");
}

VecmParams DgpSpec::params() const {
  const VecmSpec s = vecm_spec();
  VecmParams prm = VecmParams::zeros(s);
  prm.alpha = Matrix::Zero(2, 2);
  prm.alpha(0, 0) = a;
  prm.alpha(1, 1) = b;
  prm.beta = Matrix::Identity(2, 2);
  prm.gamma = {gamma * Matrix::Identity(2, 2)};
  return prm;
}

VecmSpec DgpSpec::vecm_spec() const { return VecmSpec{2, 2, 2, DeterministicCase::None, K}; }

double break_sigma(int t, int T) { return t <= (2 * T) / 3 ? 1.0 : 3.0; }

Matrix simulate_innovations(const DgpSpec& spec, std::mt19937_64& rng) {
  const int n = spec.T + spec.K;
  const int p = 2;
  std::normal_distribution<double> nd;
  Matrix e(n, p);
  switch (spec.innovation) {
    case Innovation::Homoskedastic:
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < p; ++i) e(j, i) = nd(rng);
      break;
    case Innovation::SingleBreak:
      for (int j = 0; j < n; ++j) {
        const double s = break_sigma(j + 1 - spec.K, spec.T);
        for (int i = 0; i < p; ++i) e(j, i) = s * nd(rng);
      }
      break;
    case Innovation::StochasticVolatility: {
      const double lam = spec.sv_lambda, sx = spec.sv_sigma_xi;
      const double h_sd = 0.5 * sx / std::sqrt(1.0 - lam * lam);
      double h[2];
      for (double& hi : h) hi = h_sd * nd(rng);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < p; ++i) {
          const double xi = sx * nd(rng);
          const double v = nd(rng);
          h[i] = lam * h[i] + 0.5 * xi;
          e(j, i) = v * std::exp(h[i]);
        }
      break;
    }
  }
  return e;
}

TimeSeriesMatrix simulate_dgp(const DgpSpec& spec, int rep) {
  spec.validate();
  std::mt19937_64 rng = make_stream(spec.seed, static_cast<std::uint64_t>(rep), 0xD6ULL);
  const Matrix e = simulate_innovations(spec, rng);
  const TimeSeriesMatrix path =
      simulate_vecm(spec.params(), spec.vecm_spec(), e, Matrix::Zero(2, 2));
  return TimeSeriesMatrix::from_observations(path.values(), spec.K, {"x1", "x2"});
}

double FrequencyTable::percent(std::size_t i) const {
  return reps > 0 ? 100.0 * counts.at(i) / reps : 0.0;
}

double FrequencyTable::mc_se(std::size_t i) const {
  if (reps == 0) return 0.0;
  const double q = counts.at(i) / static_cast<double>(reps);
  return 100.0 * std::sqrt(q * (1.0 - q) / reps);
}

double FrequencyTable::tolerance(std::size_t i) const { return std::max(3.0 * mc_se(i), 3.0); }

FrequencyTable FrequencyTable::tally(std::string method, std::vector<std::string> categories,
                                     const std::vector<int>& outcomes) {
  FrequencyTable t;
  t.method = std::move(method);
  t.categories = std::move(categories);
  t.counts.assign(t.categories.size(), 0);
  for (int o : outcomes) {
    if (o < 0 || o >= static_cast<int>(t.counts.size())) {
      ++t.failures;
      continue;
    }
    ++t.counts[static_cast<std::size_t>(o)];
    ++t.reps;
  }
  return t;
}

std::vector<std::string> rank_categories(int p) {
  std::vector<std::string> c;
  for (int r = 0; r <= p; ++r) c.push_back("r=" + std::to_string(r));
  return c;
}

std::vector<std::string> lag_categories() { return {"k=1", "k=2", "k=3,4"}; }

int lag_category(int k) { return k <= 1 ? 0 : (k == 2 ? 1 : 2); }

ReplicationContext::ReplicationContext(const DgpSpec& dgp, int rep, const ExperimentOptions& options)
    : dgp_(dgp), rep_(rep), options_(options), data_(simulate_dgp(dgp, rep)) {}

const VolatilityPath& ReplicationContext::volatility() {
  if (!vol_) vol_ = estimate_volatility(data_, dgp_.K, options_.kernel, options_.grid,
                                      options_.levels_intercept);
  return *vol_;
}

const LoglikSurface& ReplicationContext::surface(bool adaptive) {
  auto& slot = full_[adaptive ? 1 : 0];
  if (!slot) {
    SurfaceOptions so;
    so.flavor = options_.flavor;
    so.grrr = options_.grrr;
    slot = compute_surface(data_, dgp_.K, DeterministicCase::None,
                           adaptive ? &volatility() : nullptr, so);
  }
  return *slot;
}

const LoglikSurface& ReplicationContext::lag_surface(bool adaptive) {
  const int i = adaptive ? 1 : 0;
  if (full_[i]) return *full_[i];
  if (!lags_[i]) {
    SurfaceOptions so;
    so.flavor = options_.flavor;
    so.grrr = options_.grrr;
    so.full_rank_only = true;
    lags_[i] = compute_surface(data_, dgp_.K, DeterministicCase::None,
                               adaptive ? &volatility() : nullptr, so);
  }
  return *lags_[i];
}

int ReplicationContext::lag_hat(Penalty pen, bool adaptive) {
  return select_lag(lag_surface(adaptive), pen).k_hat;
}

const RankTestPath& ReplicationContext::bootstrap_path(BootstrapKind kind, int k) {
  const auto key = std::make_pair(static_cast<int>(kind), k);
  auto it = boot_.find(key);
  if (it != boot_.end()) return it->second;
  BootstrapScheme scheme;
  scheme.kind = kind;
  scheme.B = options_.B;
  scheme.multiplier = options_.multiplier;
  scheme.seed = stream_seed(dgp_.seed, static_cast<std::uint64_t>(rep_), 0xB0ULL,
                            static_cast<std::uint64_t>(kind));
  const VolatilityPath* vol = kind == BootstrapKind::NonAdaptiveWild ? nullptr : &volatility();
  RankTestPath path = sequential_rank(data_, k, DeterministicCase::None, vol, scheme, options_.eta,
                                      options_.grrr);
  return boot_.emplace(key, std::move(path)).first->second;
}

MethodSpec joint_rank_method(Penalty pen, bool adaptive) {
  return {method_label(pen, adaptive) + "(k,r)", rank_categories(),
          [pen, adaptive](ReplicationContext& c) { return joint_select(c.surface(adaptive), pen).r_hat; }};
}

MethodSpec joint_lag_method(Penalty pen, bool adaptive) {
  return {method_label(pen, adaptive) + "(k,r)", lag_categories(),
          [pen, adaptive](ReplicationContext& c) {
            return lag_category(joint_select(c.surface(adaptive), pen).k_hat);
          }};
}

MethodSpec lag_method(Penalty pen, bool adaptive) {
  return {method_label(pen, adaptive), lag_categories(), [pen, adaptive](ReplicationContext& c) {
            return lag_category(c.lag_hat(pen, adaptive));
          }};
}

MethodSpec sequential_rank_method(Penalty rank_pen, bool rank_adaptive, Penalty lag_pen,
                                  bool lag_adaptive) {
  return {"r_" + method_label(rank_pen, rank_adaptive) + "|k_" + method_label(lag_pen, lag_adaptive),
          rank_categories(), [=](ReplicationContext& c) {
            const int k = c.lag_hat(lag_pen, lag_adaptive);
            return select_rank_given_k(c.surface(rank_adaptive), k, rank_pen, c.options().rank_form).r_hat;
          }};
}

const char* to_string(LagChoice c) {
  switch (c) {
    case LagChoice::True: return "k0";
    case LagChoice::BIC: return "kBIC";
    case LagChoice::AlsBIC: return "kALS-BIC";
  }
  return "?";
}

MethodSpec bootstrap_rank_method(BootstrapKind kind, LagChoice lag) {
  BootstrapScheme s;
  s.kind = kind;
  return {std::string(to_string(lag)) + ":" + s.label(), rank_categories(),
          [kind, lag](ReplicationContext& c) {
            int k = c.dgp().k0();
            if (lag == LagChoice::BIC) k = c.lag_hat(Penalty::BIC, false);
            if (lag == LagChoice::AlsBIC) k = c.lag_hat(Penalty::BIC, true);
            return c.bootstrap_path(kind, k).r_hat;
          }};
}

std::vector<FrequencyTable> run_experiment(const DgpSpec& dgp, const std::vector<MethodSpec>& methods,
                                           const ExperimentOptions& options) {
  dgp.validate();
  if (methods.empty()) throw Error(ErrorKind::InvalidArgument, "no methods to run");
  const std::size_t m = methods.size();
  std::vector<std::vector<int>> outcomes(m, std::vector<int>(static_cast<std::size_t>(dgp.reps), -1));
  parallel_for(
      static_cast<std::size_t>(dgp.reps),
      [&](std::size_t rep) {
        ReplicationContext ctx(dgp, static_cast<int>(rep), options);
        for (std::size_t j = 0; j < m; ++j) {
          try {
            outcomes[j][rep] = methods[j].run(ctx);
          } catch (const Error&) {
            outcomes[j][rep] = -1;
          }
        }
      },
      options.workers);
  std::vector<FrequencyTable> tables;
  for (std::size_t j = 0; j < m; ++j)
    tables.push_back(FrequencyTable::tally(methods[j].name, methods[j].categories, outcomes[j]));
  return tables;
}

}  // namespace acoint
