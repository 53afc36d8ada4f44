#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "acoint/bootstrap.hpp"
#include "acoint/criteria.hpp"
#include "acoint/varmodel.hpp"
#include "acoint/volatility.hpp"

namespace acoint {

enum class Innovation { Homoskedastic, StochasticVolatility, SingleBreak };

const char* to_string(Innovation i);
Innovation parse_innovation(const std::string& name);

/// Bivariate VAR(2) design: alpha = diag(a, b), beta = I_2, Gamma_1 = gamma I_2,
/// no deterministic terms, X_{-K} = Delta X_{-K} = 0.
struct DgpSpec {
  double a = 0.0;
  double b = 0.0;
  double gamma = 0.0;
  Innovation innovation = Innovation::Homoskedastic;
  int T = 100;
  int K = 4;
  int reps = 500;
  std::uint64_t seed = 1;
  double sv_lambda = 0.951;
  double sv_sigma_xi = 0.314;

  /// a = b = 0 (r0 = 0); a = -0.4, b = 0 (r0 = 1); a = b = -0.4 (r0 = 2).
  static DgpSpec for_rank(int r0, double gamma, Innovation innovation, int T);

  int r0() const;
  int k0() const { return gamma != 0.0 ? 2 : 1; }
  void validate() const;
  VecmParams params() const;
  VecmSpec vecm_spec() const;
};

/// sigma_t of the single-break design: 1 up to floor(2T/3), 3 afterwards.
/// Initial values (t <= 0) use 1.
double break_sigma(int t, int T);

/// Innovations for t = 1-K..T (T + K rows, row j is t = 1 - K + j).
Matrix simulate_innovations(const DgpSpec& spec, std::mt19937_64& rng);

/// One replication: K initial values followed by T observations.
TimeSeriesMatrix simulate_dgp(const DgpSpec& spec, int rep);

struct FrequencyTable {
  std::string method;
  std::vector<std::string> categories;
  std::vector<int> counts;
  int reps = 0;      ///< successful replications
  int failures = 0;  ///< replications where the method raised an error

  double percent(std::size_t i) const;
  /// Binomial Monte Carlo standard error, in percentage points.
  double mc_se(std::size_t i) const;
  /// Acceptance band half-width: max(3 se, 3pp).
  double tolerance(std::size_t i) const;

  static FrequencyTable tally(std::string method, std::vector<std::string> categories,
                              const std::vector<int>& outcomes);
};

std::vector<std::string> rank_categories(int p = 2);
std::vector<std::string> lag_categories();
/// k = 1, 2, or "3,4" (k >= 3).
int lag_category(int k);

struct ExperimentOptions {
  StandardFlavor flavor = StandardFlavor::Johansen;
  RankPenaltyForm rank_form = RankPenaltyForm::RankDependent;
  GrrrOptions grrr;
  KernelSpec kernel;
  std::vector<double> grid = default_bandwidth_grid();
  bool levels_intercept = true;
  int B = 399;
  double eta = 0.05;
  Multiplier multiplier = Multiplier::Gaussian;
  int workers = 0;
};

/// Per-replication state. Surfaces and the volatility path are computed on
/// first use and shared by every method of the replication.
class ReplicationContext {
 public:
  ReplicationContext(const DgpSpec& dgp, int rep, const ExperimentOptions& options);

  const DgpSpec& dgp() const { return dgp_; }
  int rep() const { return rep_; }
  const ExperimentOptions& options() const { return options_; }
  const TimeSeriesMatrix& data() const { return data_; }

  const VolatilityPath& volatility();
  const LoglikSurface& surface(bool adaptive);
  /// Surface with at least the r = p column filled.
  const LoglikSurface& lag_surface(bool adaptive);

  int lag_hat(Penalty pen, bool adaptive);
  const RankTestPath& bootstrap_path(BootstrapKind kind, int k);

 private:
  DgpSpec dgp_;
  int rep_;
  ExperimentOptions options_;
  TimeSeriesMatrix data_;
  std::optional<VolatilityPath> vol_;
  std::optional<LoglikSurface> full_[2];
  std::optional<LoglikSurface> lags_[2];
  std::map<std::pair<int, int>, RankTestPath> boot_;
};

/// A selection procedure run once per replication; returns a category index.
struct MethodSpec {
  std::string name;
  std::vector<std::string> categories;
  std::function<int(ReplicationContext&)> run;
};

MethodSpec joint_rank_method(Penalty pen, bool adaptive);
MethodSpec joint_lag_method(Penalty pen, bool adaptive);
/// Step I: lag chosen at r = p.
MethodSpec lag_method(Penalty pen, bool adaptive);
/// Step II: rank by (rank_pen, rank_adaptive) at the lag chosen by (lag_pen, lag_adaptive).
MethodSpec sequential_rank_method(Penalty rank_pen, bool rank_adaptive, Penalty lag_pen,
                                  bool lag_adaptive);

enum class LagChoice { True, BIC, AlsBIC };
const char* to_string(LagChoice c);
MethodSpec bootstrap_rank_method(BootstrapKind kind, LagChoice lag);

/// Runs dgp.reps replications in parallel; output is independent of the
/// worker count.
std::vector<FrequencyTable> run_experiment(const DgpSpec& dgp, const std::vector<MethodSpec>& methods,
                                           const ExperimentOptions& options = {});

}  // namespace acoint
