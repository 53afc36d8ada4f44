#include "acoint/report.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "acoint/csv.hpp"
#include "acoint/rng.hpp"

namespace acoint {

using nlohmann::json;

const char* to_string(AnalysisMode m) {
  switch (m) {
    case AnalysisMode::Joint: return "joint";
    case AnalysisMode::SequentialIC: return "sequential-ic";
    case AnalysisMode::SequentialPLR: return "sequential-plr";
  }
  return "?";
}

AnalysisMode parse_analysis_mode(const std::string& name) {
  if (name == "joint") return AnalysisMode::Joint;
  if (name == "sequential-ic") return AnalysisMode::SequentialIC;
  if (name == "sequential-plr") return AnalysisMode::SequentialPLR;
  throw Error(ErrorKind::InvalidArgument, "unknown mode '" + name + "'");
}

void RunConfig::validate() const {
  if (K < 1) throw Error(ErrorKind::InvalidArgument, "K must be >= 1");
  if (presample >= 0 && presample < K)
    throw Error(ErrorKind::InvalidArgument, "presample rows must be at least K");
  if (penalties.empty()) throw Error(ErrorKind::InvalidArgument, "penalty set is empty");
  if (!(eta > 0.0 && eta < 1.0)) throw Error(ErrorKind::InvalidArgument, "eta must lie in (0, 1)");
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "bandwidth grid is empty");
  for (double h : grid)
    if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "bandwidths must be positive");
  if (mode == AnalysisMode::SequentialPLR) {
    BootstrapScheme s;
    s.kind = scheme;
    s.B = B;
    s.validate();
  }
}

json RunConfig::to_json() const {
  json j;
  j["input"] = input;
  j["det"] = to_string(det);
  j["K"] = K;
  j["presample"] = presample < 0 ? K : presample;
  std::vector<std::string> pens;
  for (Penalty p : penalties) pens.push_back(to_string(p));
  j["penalties"] = pens;
  j["mode"] = to_string(mode);
  BootstrapScheme s;
  s.kind = scheme;
  j["scheme"] = s.label();
  j["B"] = B;
  j["eta"] = eta;
  j["multiplier"] = to_string(multiplier);
  j["seed"] = seed;
  j["flavor"] = to_string(flavor);
  j["kernel"] = to_string(kernel);
  j["bandwidth_grid"] = grid;
  j["levels_intercept"] = levels_intercept;
  return j;
}

TimeSeriesMatrix load_series(const RunConfig& config) {
  const SeriesTable tab = read_series_csv(config.input);
  const int n0 = config.presample < 0 ? config.K : config.presample;
  if (tab.values.rows() <= n0)
    throw Error(ErrorKind::SampleTooSmall, "input has no rows after the initial values");
  return TimeSeriesMatrix::from_observations(tab.values, n0, tab.names);
}

namespace {

json surface_json(const LoglikSurface& s) {
  json cells = json::array();
  for (const Candidate& c : s.cells) {
    json j{{"k", c.k}, {"r", c.r}, {"pi", c.pi}, {"valid", c.valid},
           {"converged", c.converged}, {"iterations", c.iterations}};
    j["loglik"] = std::isfinite(c.loglik) ? json(c.loglik) : json(nullptr);
    if (!c.note.empty()) j["note"] = c.note;
    cells.push_back(j);
  }
  return cells;
}

json values_json(const SelectionResult& r) {
  json v = json::array();
  for (const SurfaceValue& s : r.surface)
    v.push_back({{"k", s.k}, {"r", s.r}, {"value", s.valid ? json(s.value) : json(nullptr)}});
  return v;
}

void collect(std::vector<std::string>& warnings, const SelectionResult& r) {
  for (const std::string& line : r.decision_log)
    if (line.rfind("excluded", 0) == 0) warnings.push_back(r.method + ": " + line);
}

struct LagSelector {
  Penalty pen;
  bool adaptive;
  std::string label() const { return method_label(pen, adaptive); }
};

}  // namespace

json run_analysis(const RunConfig& config, const TimeSeriesMatrix& data, VolatilityPath* vol_out) {
  config.validate();
  std::vector<std::string> warnings;

  KernelSpec ks;
  ks.kernel = config.kernel;
  const VolatilityPath vol =
      estimate_volatility(data, config.K, ks, config.grid, config.levels_intercept);
  if (vol.ridge_repairs > 0)
    warnings.push_back("volatility path: positive-definiteness repair applied at " +
                       std::to_string(vol.ridge_repairs) + " dates");
  if (vol.bandwidth == config.grid.front() || vol.bandwidth == config.grid.back())
    warnings.push_back("volatility path: CV bandwidth at the edge of the grid");

  SurfaceOptions so;
  so.flavor = config.flavor;
  so.grrr.seed = config.seed;
  const LoglikSurface standard = compute_surface(data, config.K, config.det, nullptr, so);
  const LoglikSurface adaptive = compute_surface(data, config.K, config.det, &vol, so);
  for (const LoglikSurface* s : {&standard, &adaptive})
    for (const Candidate& c : s->cells)
      if (!c.valid)
        warnings.push_back(std::string(s->adaptive ? "adaptive" : "standard") + " candidate (k=" +
                           std::to_string(c.k) + ", r=" + std::to_string(c.r) + "): " +
                           (c.note.empty() ? "invalid" : c.note));
  auto surface = [&](bool a) -> const LoglikSurface& { return a ? adaptive : standard; };

  std::vector<LagSelector> selectors;
  for (bool a : {true, false})
    for (Penalty pen : config.penalties) selectors.push_back({pen, a});

  json report;
  report["config"] = config.to_json();
  report["data"] = {{"T", data.T()}, {"p", data.p()}, {"names", data.names()},
                    {"presample_rows", data.presample_rows()}};
  report["volatility"] = {{"bandwidth", vol.bandwidth},
                          {"ridge_repairs", vol.ridge_repairs},
                          {"kernel", to_string(config.kernel)},
                          {"sum_log_det", vol.sum_log_det()}};

  // Step I: lag at full rank.
  std::map<std::string, int> k_hat;
  json lags = json::array();
  for (const LagSelector& ls : selectors) {
    const SelectionResult r = select_lag(surface(ls.adaptive), ls.pen);
    collect(warnings, r);
    k_hat[ls.label()] = r.k_hat;
    lags.push_back({{"method", ls.label()}, {"k_hat", r.k_hat}, {"values", values_json(r)}});
  }
  report["lag_selection"] = lags;

  // Step II: rank at each selected lag.
  json ranks = json::array();
  for (const LagSelector& rank_sel : selectors)
    for (const LagSelector& lag_sel : selectors) {
      const int k = k_hat[lag_sel.label()];
      const SelectionResult r = select_rank_given_k(surface(rank_sel.adaptive), k, rank_sel.pen,
                                                    RankPenaltyForm::RankDependent);
      collect(warnings, r);
      ranks.push_back({{"rank_method", rank_sel.label()}, {"lag_method", lag_sel.label()},
                       {"k", k}, {"r_hat", r.r_hat}, {"values", values_json(r)}});
    }
  report["rank_selection"] = ranks;

  json joint = json::array();
  std::map<std::string, std::pair<int, int>> joint_hat;
  for (const LagSelector& ls : selectors) {
    const SelectionResult r = joint_select(surface(ls.adaptive), ls.pen);
    collect(warnings, r);
    joint_hat[ls.label()] = {r.k_hat, r.r_hat};
    joint.push_back({{"method", ls.label()}, {"k_hat", r.k_hat}, {"r_hat", r.r_hat},
                     {"values", values_json(r)}});
  }
  report["joint_selection"] = joint;

  const std::string headline = method_label(config.penalties.front(), true);
  json selection{{"mode", to_string(config.mode)}, {"method", headline}};

  if (config.mode == AnalysisMode::SequentialPLR) {
    BootstrapScheme scheme;
    scheme.kind = config.scheme;
    scheme.B = config.B;
    scheme.multiplier = config.multiplier;
    const VolatilityPath* v = config.scheme == BootstrapKind::NonAdaptiveWild ? nullptr : &vol;
    std::map<int, RankTestPath> paths;
    json boot = json::array();
    for (const LagSelector& ls : selectors) {
      const int k = k_hat[ls.label()];
      if (!paths.count(k)) {
        scheme.seed = stream_seed(config.seed, 0xB0ULL, static_cast<std::uint64_t>(k));
        paths.emplace(k, sequential_rank(data, k, config.det, v, scheme, config.eta, so.grrr));
      }
      const RankTestPath& path = paths.at(k);
      json tests = json::array();
      for (const PlrOutcome& o : path.outcomes) {
        tests.push_back({{"r", o.r}, {"statistic", o.statistic}, {"pvalue", o.pvalue},
                         {"dropped", o.dropped}});
        if (!o.warning.empty())
          warnings.push_back(scheme.label() + " (k=" + std::to_string(k) +
                             ", r=" + std::to_string(o.r) + "): " + o.warning);
      }
      boot.push_back({{"lag_method", ls.label()}, {"k", k}, {"scheme", scheme.label()},
                      {"r_hat", path.r_hat}, {"tests", tests}});
    }
    report["bootstrap"] = boot;
    const int k = k_hat[headline];
    selection["method"] = scheme.label() + " | k " + headline;
    selection["k"] = k;
    selection["r"] = paths.at(k).r_hat;
  } else if (config.mode == AnalysisMode::SequentialIC) {
    const int k = k_hat[headline];
    selection["method"] = headline + " | k " + headline;
    selection["k"] = k;
    selection["r"] = select_rank_given_k(adaptive, k, config.penalties.front(),
                                         RankPenaltyForm::RankDependent)
                         .r_hat;
  } else {
    selection["k"] = joint_hat[headline].first;
    selection["r"] = joint_hat[headline].second;
  }
  report["selection"] = selection;
  report["surfaces"] = {{"standard", surface_json(standard)}, {"adaptive", surface_json(adaptive)}};

  // Identical messages can arise from several selectors sharing a surface.
  std::vector<std::string> unique;
  std::set<std::string> seen;
  for (const std::string& w : warnings)
    if (seen.insert(w).second) unique.push_back(w);
  report["warnings"] = unique;

  if (vol_out) *vol_out = vol;
  return report;
}

void write_markdown_report(std::ostream& out, const json& rep) {
  const json& cfg = rep["config"];
  out << "# Cointegration rank and lag report\n\n";
  out << "Input `" << cfg["input"].get<std::string>() << "`, T = " << rep["data"]["T"]
      << ", p = " << rep["data"]["p"] << ", deterministic case `"
      << cfg["det"].get<std::string>() << "`, K = " << cfg["K"] << ", seed " << cfg["seed"]
      << ".\n\n";
  out << "Volatility bandwidth h = " << std::setprecision(4) << rep["volatility"]["bandwidth"].get<double>()
      << " (" << cfg["kernel"].get<std::string>() << " kernel).\n\n";

  const json& sel = rep["selection"];
  out << "**Selected** (" << sel["mode"].get<std::string>() << ", "
      << sel["method"].get<std::string>() << "): k = " << sel["k"] << ", r = " << sel["r"]
      << "\n\n";

  out << "## Lag selection at full rank\n\n| criterion | k |\n|---|---|\n";
  for (const json& l : rep["lag_selection"])
    out << "| " << l["method"].get<std::string>() << " | " << l["k_hat"] << " |\n";

  out << "\n## Rank given the selected lag\n\n| rank criterion | lag criterion | k | r |\n|---|---|---|---|\n";
  for (const json& r : rep["rank_selection"])
    out << "| " << r["rank_method"].get<std::string>() << " | " << r["lag_method"].get<std::string>()
        << " | " << r["k"] << " | " << r["r_hat"] << " |\n";

  out << "\n## Joint selection\n\n| criterion | k | r |\n|---|---|---|\n";
  for (const json& j : rep["joint_selection"])
    out << "| " << j["method"].get<std::string>() << " | " << j["k_hat"] << " | " << j["r_hat"]
        << " |\n";

  if (rep.contains("bootstrap")) {
    out << "\n## Bootstrap rank tests\n\n| lag criterion | k | scheme | r | Q | p-value |\n"
           "|---|---|---|---|---|---|\n";
    out << std::fixed;
    for (const json& b : rep["bootstrap"])
      for (const json& t : b["tests"])
        out << "| " << b["lag_method"].get<std::string>() << " | " << b["k"] << " | "
            << b["scheme"].get<std::string>() << " | " << t["r"] << " | " << std::setprecision(3)
            << t["statistic"].get<double>() << " | " << t["pvalue"].get<double>() << " |\n";
    out.unsetf(std::ios::floatfield);
  }

  out << "\n## Warnings\n\n";
  if (rep["warnings"].empty()) out << "none\n";
  for (const json& w : rep["warnings"]) out << "- " << w.get<std::string>() << "\n";
}

}  // namespace acoint
