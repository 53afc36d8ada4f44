#include "acoint/criteria.hpp"

#include <cctype>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "acoint/rrr.hpp"

namespace acoint {

const char* to_string(Penalty p) {
  switch (p) {
    case Penalty::AIC: return "AIC";
    case Penalty::BIC: return "BIC";
    case Penalty::HQC: return "HQC";
  }
  return "?";
}

Penalty parse_penalty(const std::string& name) {
  std::string u;
  for (char ch : name) u += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  if (u == "AIC") return Penalty::AIC;
  if (u == "BIC") return Penalty::BIC;
  if (u == "HQC" || u == "HQ") return Penalty::HQC;
  throw Error(ErrorKind::InvalidArgument, "unknown penalty '" + name + "'");
}

double penalty_weight(Penalty p, int T) {
  if (T < 3) throw Error(ErrorKind::SampleTooSmall, "penalty weights need T >= 3");
  switch (p) {
    case Penalty::AIC: return 2.0;
    case Penalty::BIC: return std::log(static_cast<double>(T));
    case Penalty::HQC: return 2.0 * std::log(std::log(static_cast<double>(T)));
  }
  return 0.0;
}

int penalty_count(int p, int k, int r, DeterministicCase det) {
  VecmSpec{p, k, r, det, k}.validate();
  const int dyn = p * p * (k - 1);
  switch (det) {
    case DeterministicCase::None: return r * (2 * p - r) + dyn;
    case DeterministicCase::RestrictedConstant: return r * (2 * p - r + 1) + dyn;
    case DeterministicCase::RestrictedTrend: return r * (2 * p - r + 1) + p + dyn;
  }
  return 0;
}

int penalty_count(const VecmSpec& spec) { return penalty_count(spec.p, spec.k, spec.r, spec.det); }

const char* to_string(StandardFlavor f) {
  return f == StandardFlavor::IdentityWeighted ? "identity" : "johansen";
}

StandardFlavor parse_standard_flavor(const std::string& name) {
  if (name == "identity") return StandardFlavor::IdentityWeighted;
  if (name == "johansen") return StandardFlavor::Johansen;
  throw Error(ErrorKind::InvalidArgument, "unknown standard IC flavor '" + name + "'");
}

const char* to_string(SelectionMode m) {
  switch (m) {
    case SelectionMode::Joint: return "joint";
    case SelectionMode::SequentialIC: return "sequential-ic";
    case SelectionMode::SequentialPLR: return "sequential-plr";
  }
  return "?";
}

const Candidate& LoglikSurface::at(int k, int r) const {
  if (k < 1 || k > K || r < 0 || r > p)
    throw Error(ErrorKind::InvalidArgument, "candidate (k, r) outside the surface");
  return cells[static_cast<std::size_t>((k - 1) * (p + 1) + r)];
}

Candidate& LoglikSurface::at(int k, int r) {
  return const_cast<Candidate&>(static_cast<const LoglikSurface&>(*this).at(k, r));
}

LoglikSurface compute_surface(const TimeSeriesMatrix& data, int K, DeterministicCase det,
                              const VolatilityPath* vol, const SurfaceOptions& options) {
  if (K < 1) throw Error(ErrorKind::InvalidArgument, "K must be >= 1");
  LoglikSurface s;
  s.p = data.p();
  s.K = K;
  s.T = data.T();
  s.det = det;
  s.adaptive = vol != nullptr;
  s.flavor = options.flavor;
  s.cells.resize(static_cast<std::size_t>(K * (s.p + 1)));
  const Matrix identity = Matrix::Identity(s.p, s.p);

  for (int k = 1; k <= K; ++k) {
    const VecmSpec base{s.p, k, 0, det, K};
    const LagDesign design = build_lag_design(data, base);
    std::optional<ConcentratedMoments> moments;
    for (int r = 0; r <= s.p; ++r) {
      Candidate& c = s.at(k, r);
      c.k = k;
      c.r = r;
      c.pi = penalty_count(s.p, k, r, det);
      if (options.full_rank_only && r != s.p) {
        c.note = "skipped";
        continue;
      }
      try {
        if (vol) {
          VecmSpec spec = base;
          spec.r = r;
          const GrrrEstimate est = switch_estimate(design, spec, *vol, std::nullopt, options.grrr);
          c.loglik = est.loglik;
          c.converged = est.converged;
          c.iterations = est.iterations;
          if (!est.converged) c.note = "switching algorithm did not converge";
        } else {
          if (!moments) moments = concentrate(design);
          c.loglik = options.flavor == StandardFlavor::Johansen
                         ? solve_rrr(*moments, r).loglik
                         : solve_rrr_fixed_covariance(*moments, r, identity).loglik;
          c.converged = true;
        }
        c.valid = c.converged && std::isfinite(c.loglik);
        if (c.converged && !std::isfinite(c.loglik)) c.note = "non-finite log-likelihood";
      } catch (const Error& e) {
        c.valid = false;
        c.note = e.what();
      }
    }
  }
  return s;
}

double information_criterion(double loglik, int pi, double c_T) { return -2.0 * loglik + c_T * pi; }

std::string method_label(Penalty pen, bool adaptive) {
  return (adaptive ? std::string("ALS-") : std::string()) + to_string(pen);
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

struct Argmin {
  int k = 0, r = 0;
  double value = std::numeric_limits<double>::infinity();
  bool found = false;
};

// Scans (k, r) in lexicographic order so that ties keep the smaller model.
void consider(Argmin& best, const SurfaceValue& v) {
  if (!v.valid) return;
  if (!best.found || v.value < best.value) {
    best = {v.k, v.r, v.value, true};
  }
}

SelectionResult run(const LoglikSurface& s, Penalty pen, SelectionMode mode, int k_lo, int k_hi,
                    int r_lo, int r_hi, RankPenaltyForm form) {
  SelectionResult res;
  res.mode = mode;
  res.adaptive = s.adaptive;
  res.method = method_label(pen, s.adaptive);
  const double c_T = penalty_weight(pen, s.T);
  Argmin best;
  for (int k = k_lo; k <= k_hi; ++k) {
    for (int r = r_lo; r <= r_hi; ++r) {
      const Candidate& c = s.at(k, r);
      const int pi = form == RankPenaltyForm::FullRank ? s.at(k, s.p).pi : c.pi;
      SurfaceValue v{k, r, c.valid ? information_criterion(c.loglik, pi, c_T) : 0.0, c.valid};
      if (!c.valid)
        res.decision_log.push_back("excluded (k=" + std::to_string(k) + ", r=" + std::to_string(r) +
                                   "): " + (c.note.empty() ? "invalid" : c.note));
      res.surface.push_back(v);
      consider(best, v);
    }
  }
  if (!best.found)
    throw Error(ErrorKind::InvalidArgument, "no valid candidate model to select from");
  res.k_hat = best.k;
  res.r_hat = best.r;
  res.decision_log.push_back(res.method + " minimum " + fmt(best.value) + " at (k=" +
                             std::to_string(best.k) + ", r=" + std::to_string(best.r) + ")");
  return res;
}

}  // namespace

SelectionResult joint_select(const LoglikSurface& s, Penalty pen) {
  return run(s, pen, SelectionMode::Joint, 1, s.K, 0, s.p, RankPenaltyForm::RankDependent);
}

SelectionResult select_lag(const LoglikSurface& s, Penalty pen) {
  SelectionResult res =
      run(s, pen, SelectionMode::SequentialIC, 1, s.K, s.p, s.p, RankPenaltyForm::RankDependent);
  return res;
}

SelectionResult select_rank_given_k(const LoglikSurface& s, int k, Penalty pen,
                                    RankPenaltyForm form) {
  if (k < 1 || k > s.K) throw Error(ErrorKind::InvalidArgument, "k-hat outside 1..K");
  return run(s, pen, SelectionMode::SequentialIC, k, k, 0, s.p, form);
}

void write_surface_csv(std::ostream& out, const LoglikSurface& s, Penalty pen) {
  const double c_T = penalty_weight(pen, s.T);
  out << "k,r,loglik,pi,value,valid,converged\n" << std::setprecision(12);
  for (const Candidate& c : s.cells) {
    if (c.note == "skipped") continue;
    out << c.k << ',' << c.r << ',' << c.loglik << ',' << c.pi << ','
        << information_criterion(c.loglik, c.pi, c_T) << ',' << c.valid << ',' << c.converged
        << '\n';
  }
}

}  // namespace acoint
