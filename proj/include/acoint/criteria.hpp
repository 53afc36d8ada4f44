#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "acoint/grrr.hpp"
#include "acoint/varmodel.hpp"
#include "acoint/volatility.hpp"

namespace acoint {

enum class Penalty { AIC, BIC, HQC };

const char* to_string(Penalty p);
Penalty parse_penalty(const std::string& name);

/// c_T: 2, log T, 2 log log T.
double penalty_weight(Penalty p, int T);

/// Free parameter count pi(k, r) of H_{k,r}.
int penalty_count(int p, int k, int r, DeterministicCase det);
int penalty_count(const VecmSpec& spec);

/// How the non-adaptive likelihood is formed.
///  IdentityWeighted: Sigma_t = I_p in the adaptive likelihood.
///  Johansen: Gaussian likelihood with Omega concentrated out.
enum class StandardFlavor { IdentityWeighted, Johansen };

const char* to_string(StandardFlavor f);
StandardFlavor parse_standard_flavor(const std::string& name);

/// Penalty used when choosing r at a fixed k: pi(k, r) or the full-rank
/// count pi(k, p) (which makes the penalty constant across r).
enum class RankPenaltyForm { RankDependent, FullRank };

struct Candidate {
  int k = 1;
  int r = 0;
  double loglik = 0.0;
  int pi = 0;
  bool valid = false;
  bool converged = false;
  int iterations = 0;
  std::string note;
};

/// Maximised log-likelihood for every (k, r) in {1..K} x {0..p}, all on the
/// same effective sample t = 1..T.
struct LoglikSurface {
  int p = 0;
  int K = 1;
  int T = 0;
  DeterministicCase det = DeterministicCase::None;
  bool adaptive = false;
  StandardFlavor flavor = StandardFlavor::Johansen;
  std::vector<Candidate> cells;

  const Candidate& at(int k, int r) const;
  Candidate& at(int k, int r);
};

struct SurfaceOptions {
  StandardFlavor flavor = StandardFlavor::Johansen;
  GrrrOptions grrr;
  /// Only r = p candidates (enough for lag selection).
  bool full_rank_only = false;
};

/// vol == nullptr gives the standard (non-adaptive) surface.
LoglikSurface compute_surface(const TimeSeriesMatrix& data, int K, DeterministicCase det,
                              const VolatilityPath* vol, const SurfaceOptions& options = {});

double information_criterion(double loglik, int pi, double c_T);

enum class SelectionMode { Joint, SequentialIC, SequentialPLR };
const char* to_string(SelectionMode m);

struct SurfaceValue {
  int k = 1;
  int r = 0;
  double value = 0.0;
  bool valid = false;
};

struct SelectionResult {
  SelectionMode mode = SelectionMode::Joint;
  std::string method;
  int k_hat = 0;
  int r_hat = 0;
  bool adaptive = false;
  std::vector<SurfaceValue> surface;
  std::vector<std::string> decision_log;
};

/// Method label as printed in tables, e.g. "ALS-BIC" or "HQC".
std::string method_label(Penalty pen, bool adaptive);

SelectionResult joint_select(const LoglikSurface& s, Penalty pen);
SelectionResult select_lag(const LoglikSurface& s, Penalty pen);
SelectionResult select_rank_given_k(const LoglikSurface& s, int k, Penalty pen,
                                    RankPenaltyForm form = RankPenaltyForm::RankDependent);

/// CSV: k,r,loglik,pi,value,valid,converged
void write_surface_csv(std::ostream& out, const LoglikSurface& s, Penalty pen);

}  // namespace acoint
