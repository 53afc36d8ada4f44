// acoint: rank and lag determination for VECMs with time-varying volatility.
//
//   acoint analyze --input data.csv --det trend --mode sequential-plr --B 999
//   acoint replicate-table --table 1 --reps 500 --csv t1.csv
//   acoint simulate --r0 1 --gamma 0.5 --innovation sv --T 400 --out sim.csv
//
// Every subcommand takes --config FILE with "key = value" lines using the
// long option names; values from the file take precedence over the command
// line.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acoint/csv.hpp"
#include "acoint/montecarlo.hpp"
#include "acoint/report.hpp"
#include "acoint/tables.hpp"

using namespace acoint;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

template <class T>
std::vector<T> parse_numbers(const std::string& s) {
  std::vector<T> out;
  for (const std::string& item : split_list(s)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw Error(ErrorKind::Parse, "not a number: '" + item + "'");
    out.push_back(static_cast<T>(v));
  }
  if (out.empty()) throw Error(ErrorKind::Parse, "empty list '" + s + "'");
  return out;
}

// Appends the config file entries after the user's arguments. With every
// option set to keep its last value, the file wins.
std::vector<std::string> with_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string path, sub = argc > 1 ? argv[1] : "";
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open config file '" + path + "'");
  for (const CLI::ConfigItem& item : CLI::ConfigINI().from_config(in)) {
    if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == sub)) continue;
    if (item.name == "config" || item.name == "++" || item.name == "--") continue;
    std::string value;
    for (const std::string& v : item.inputs) value += (value.empty() ? "" : ",") + v;
    args.push_back("--" + item.name + "=" + value);
  }
  return args;
}

void set_workers(int workers) {
  if (workers > 0) setenv("ACOINT_WORKERS", std::to_string(workers).c_str(), 1);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  f << content;
  if (!f) throw Error(ErrorKind::InvalidArgument, "write failed for '" + path + "'");
}

struct AnalyzeArgs {
  RunConfig cfg;
  std::string det = "none", penalties = "HQC,BIC", mode = "joint", scheme = "variance",
              multiplier = "gaussian", flavor = "johansen", kernel = "gaussian", grid;
  int workers = 0;
};

int run_analyze(AnalyzeArgs& a) {
  RunConfig& cfg = a.cfg;
  cfg.det = parse_deterministic(a.det);
  cfg.penalties.clear();
  for (const std::string& p : split_list(a.penalties)) cfg.penalties.push_back(parse_penalty(p));
  cfg.mode = parse_analysis_mode(a.mode);
  cfg.scheme = parse_bootstrap_kind(a.scheme);
  cfg.multiplier = parse_multiplier(a.multiplier);
  cfg.flavor = parse_standard_flavor(a.flavor);
  cfg.kernel = parse_kernel(a.kernel);
  if (!a.grid.empty()) cfg.grid = parse_numbers<double>(a.grid);
  set_workers(a.workers);
  cfg.validate();

  const TimeSeriesMatrix data = load_series(cfg);
  VolatilityPath vol;
  const nlohmann::json report = run_analysis(cfg, data, &vol);

  // Render everything before touching the file system.
  const std::string json_text = report.dump(2) + "\n";
  std::ostringstream md, vcsv;
  write_markdown_report(md, report);
  write_volatility_csv(vcsv, vol);

  if (!cfg.json_out.empty()) write_file(cfg.json_out, json_text);
  if (!cfg.markdown_out.empty()) write_file(cfg.markdown_out, md.str());
  if (!cfg.volatility_out.empty()) write_file(cfg.volatility_out, vcsv.str());
  if (cfg.json_out.empty() && cfg.markdown_out.empty()) std::cout << md.str();
  for (const auto& w : report["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
  return 0;
}

struct TableArgs {
  int id = 1;
  TableConfig cfg;
  std::string gammas, Ts, flavor = "johansen", multiplier = "gaussian", csv, text;
  int workers = 0;
};

int run_table(TableArgs& a) {
  if (!a.gammas.empty()) a.cfg.gammas = parse_numbers<double>(a.gammas);
  if (!a.Ts.empty()) a.cfg.Ts = parse_numbers<int>(a.Ts);
  a.cfg.options.flavor = parse_standard_flavor(a.flavor);
  a.cfg.options.multiplier = parse_multiplier(a.multiplier);
  if (a.cfg.reps < 1) throw Error(ErrorKind::InvalidArgument, "reps must be >= 1");
  set_workers(a.workers);
  table_title(a.id);

  const TableResult t = replicate_table(a.id, a.cfg);
  std::ostringstream csv, text;
  write_table_csv(csv, t);
  write_table_text(text, t);
  if (!a.csv.empty()) write_file(a.csv, csv.str());
  if (!a.text.empty()) write_file(a.text, text.str());
  if (a.text.empty()) std::cout << text.str();
  return 0;
}

struct SimulateArgs {
  int r0 = 1, rep = 0;
  double gamma = 0.5;
  std::string innovation = "homoskedastic", out;
  DgpSpec dgp;
};

int run_simulate(SimulateArgs& a) {
  DgpSpec d = DgpSpec::for_rank(a.r0, a.gamma, parse_innovation(a.innovation), a.dgp.T);
  d.K = a.dgp.K;
  d.seed = a.dgp.seed;
  d.sv_lambda = a.dgp.sv_lambda;
  d.sv_sigma_xi = a.dgp.sv_sigma_xi;
  const TimeSeriesMatrix x = simulate_dgp(d, a.rep);
  std::ostringstream os;
  write_series_csv(os, x);
  if (a.out.empty())
    std::cout << os.str();
  else
    write_file(a.out, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cointegration rank and lag selection under time-varying volatility"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config;

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Select (k, r) for a CSV data set and write a report");
  analyze->add_option("--config", config, "key = value file; overrides flags");
  analyze->add_option("--input,-i", an.cfg.input, "CSV with a header row; first rows are initial values")
      ->required();
  analyze->add_option("--det", an.det, "none | constant | trend")->capture_default_str();
  analyze->add_option("--K", an.cfg.K, "maximum lag")->capture_default_str();
  analyze->add_option("--presample", an.cfg.presample, "initial-value rows (default K)");
  analyze->add_option("--penalties", an.penalties, "comma list of AIC, BIC, HQC")->capture_default_str();
  analyze->add_option("--mode", an.mode, "joint | sequential-ic | sequential-plr")->capture_default_str();
  analyze->add_option("--scheme", an.scheme, "variance | wild | nonadaptive-wild")->capture_default_str();
  analyze->add_option("--B", an.cfg.B, "bootstrap replications")->capture_default_str();
  analyze->add_option("--eta", an.cfg.eta, "test level")->capture_default_str();
  analyze->add_option("--multiplier", an.multiplier, "gaussian | rademacher")->capture_default_str();
  analyze->add_option("--seed", an.cfg.seed, "random seed")->capture_default_str();
  analyze->add_option("--flavor", an.flavor, "standard IC likelihood: johansen | identity")
      ->capture_default_str();
  analyze->add_option("--kernel", an.kernel, "gaussian | epanechnikov")->capture_default_str();
  analyze->add_option("--bandwidth-grid", an.grid, "comma list of h values");
  analyze->add_option("--levels-intercept", an.cfg.levels_intercept,
                      "intercept in the levels VAR used for the volatility path")
      ->capture_default_str();
  analyze->add_option("--json", an.cfg.json_out, "JSON report path");
  analyze->add_option("--markdown", an.cfg.markdown_out, "markdown report path");
  analyze->add_option("--volatility", an.cfg.volatility_out, "volatility path CSV");
  analyze->add_option("--workers", an.workers, "worker threads (else ACOINT_WORKERS)");

  TableArgs tb;
  auto* table = app.add_subcommand("replicate-table", "Run the Monte Carlo design of table 1..6");
  table->add_option("--config", config, "key = value file; overrides flags");
  table->add_option("--table,-t", tb.id, "table id 1..6")->required();
  table->add_option("--reps", tb.cfg.reps, "replications per design point")->capture_default_str();
  table->add_option("--seed", tb.cfg.seed, "master seed")->capture_default_str();
  table->add_option("--gammas", tb.gammas, "comma list (default 0,0.1,0.5,0.9)");
  table->add_option("--Ts", tb.Ts, "comma list (default 50,100)");
  table->add_option("--B", tb.cfg.options.B, "bootstrap replications")->capture_default_str();
  table->add_option("--eta", tb.cfg.options.eta, "test level")->capture_default_str();
  table->add_option("--multiplier", tb.multiplier, "gaussian | rademacher")->capture_default_str();
  table->add_option("--flavor", tb.flavor, "standard IC likelihood: johansen | identity")
      ->capture_default_str();
  table->add_option("--csv", tb.csv, "long-format CSV path");
  table->add_option("--text", tb.text, "aligned text path (default stdout)");
  table->add_option("--workers", tb.workers, "worker threads (else ACOINT_WORKERS)");

  SimulateArgs sm;
  auto* simulate = app.add_subcommand("simulate", "Write one replication of the bivariate VAR(2) design");
  simulate->add_option("--config", config, "key = value file; overrides flags");
  simulate->add_option("--r0", sm.r0, "true rank 0..2")->capture_default_str();
  simulate->add_option("--gamma", sm.gamma, "short-run coefficient in [0, 1)")->capture_default_str();
  simulate->add_option("--innovation", sm.innovation, "homoskedastic | sv | break")->capture_default_str();
  simulate->add_option("--T", sm.dgp.T, "sample size")->capture_default_str();
  simulate->add_option("--K", sm.dgp.K, "initial-value rows")->capture_default_str();
  simulate->add_option("--seed", sm.dgp.seed, "master seed")->capture_default_str();
  simulate->add_option("--rep", sm.rep, "replication index")->capture_default_str();
  simulate->add_option("--sv-lambda", sm.dgp.sv_lambda)->capture_default_str();
  simulate->add_option("--sv-sigma-xi", sm.dgp.sv_sigma_xi)->capture_default_str();
  simulate->add_option("--out,-o", sm.out, "CSV path (default stdout)");

  auto* reference = app.add_subcommand("reference", "Print every flag with its default");

  try {
    std::vector<std::string> args = with_config(argc, argv);
    std::vector<const char*> cargs;
    for (const std::string& s : args) cargs.push_back(s.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*analyze) return run_analyze(an);
    if (*table) return run_table(tb);
    if (*simulate) return run_simulate(sm);
    if (*reference) {
      for (CLI::App* sub : {analyze, table, simulate}) std::cout << sub->help() << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
