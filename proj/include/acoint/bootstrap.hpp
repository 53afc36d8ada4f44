#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "acoint/grrr.hpp"
#include "acoint/rrr.hpp"
#include "acoint/varmodel.hpp"
#include "acoint/volatility.hpp"

namespace acoint {

/// VarianceBootstrap and WildBootstrap drive the adaptive PLR statistic;
/// NonAdaptiveWild is the trace-statistic wild bootstrap (PLR-WB).
enum class BootstrapKind { VarianceBootstrap, WildBootstrap, NonAdaptiveWild };
enum class Multiplier { Gaussian, Rademacher };

const char* to_string(BootstrapKind k);
BootstrapKind parse_bootstrap_kind(const std::string& name);
const char* to_string(Multiplier m);
Multiplier parse_multiplier(const std::string& name);

struct BootstrapScheme {
  BootstrapKind kind = BootstrapKind::VarianceBootstrap;
  int B = 399;
  std::uint64_t seed = 20240101;
  Multiplier multiplier = Multiplier::Gaussian;

  void validate() const;
  /// Table label: ALR-VB, ALR-WB or PLR-WB.
  std::string label() const;
};

struct PlrOutcome {
  int r = 0;
  int k = 1;
  double statistic = 0.0;
  double pvalue = 1.0;
  std::vector<double> boot_stats;  ///< by replicate index; NaN for dropped replicates
  int dropped = 0;
  std::string warning;
  BootstrapScheme scheme;
};

struct RankTestPath {
  std::vector<PlrOutcome> outcomes;
  int r_hat = 0;
  int k = 1;
  double eta = 0.05;
};

struct PlrStatistic {
  double q = 0.0;            ///< -2 [l(k, r) - l(k, p)]
  double q_quadratic = 0.0;  ///< sum_t (e_r' S_t^{-1} e_r - e_p' S_t^{-1} e_p)
  bool converged = true;
};

/// Adaptive PLR statistic for H(r) against H(p) at lag k.
PlrStatistic plr_statistic(const LagDesign& design, int r, const VolatilityPath& vol,
                           const GrrrOptions& options = {});

/// Bootstrap errors for t = 1..T. Variance scheme: Sigma_t^{1/2} z_t; wild
/// schemes: residuals(t) * w_t.
Matrix draw_bootstrap_errors(const BootstrapScheme& scheme, const Matrix& residuals,
                             const VolatilityPath* vol, std::mt19937_64& rng);

/// Forward recursion with the rank-r RRR parameters, started from the
/// observed initial values of `data`.
TimeSeriesMatrix generate_bootstrap_sample(const RrrEstimate& fit, const VecmSpec& spec,
                                           const Matrix& errors, const TimeSeriesMatrix& data);

/// Convenience: draw errors from the keyed stream (seed, r, b) and recurse.
TimeSeriesMatrix generate_bootstrap_sample(const RrrEstimate& fit, const VecmSpec& spec,
                                           const BootstrapScheme& scheme, const VolatilityPath* vol,
                                           const TimeSeriesMatrix& data, int b);

/// p* = (1 + #{Q*_b >= Q}) / (B_used + 1). vol is required for the adaptive
/// kinds and ignored for NonAdaptiveWild.
PlrOutcome bootstrap_pvalue(const TimeSeriesMatrix& data, int k, int r, DeterministicCase det,
                            const VolatilityPath* vol, const BootstrapScheme& scheme,
                            const GrrrOptions& options = {});

/// Tests r = 0, 1, ... and stops at the first p* > eta; r-hat = p if every
/// r < p is rejected.
RankTestPath sequential_rank(const TimeSeriesMatrix& data, int k, DeterministicCase det,
                             const VolatilityPath* vol, const BootstrapScheme& scheme, double eta,
                             const GrrrOptions& options = {});

/// PLR-WB: trace statistic, wild bootstrap, no volatility weighting.
RankTestPath nonadaptive_wild_plr(const TimeSeriesMatrix& data, int k, DeterministicCase det,
                                  double eta, int B, std::uint64_t seed,
                                  Multiplier multiplier = Multiplier::Gaussian);

}  // namespace acoint
