#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "acoint/csv.hpp"
#include "acoint/report.hpp"
#include "helpers.hpp"

using namespace acoint;

namespace {

std::string temp_csv(const TimeSeriesMatrix& x, const std::string& tag) {
  const std::string path = "report_test_" + tag + ".csv";
  std::ofstream f(path);
  write_series_csv(f, x);
  return path;
}

}  // namespace

TEST_CASE("csv reader rejects malformed input") {
  std::istringstream ragged("a,b\n1,2\n3\n");
  CHECK_THROWS_AS(read_series_csv(ragged), Error);
  std::istringstream text("a,b\n1,x\n");
  CHECK_THROWS_AS(read_series_csv(text), Error);
  std::istringstream empty_cell("a,b\n1,\n");
  CHECK_THROWS_AS(read_series_csv(empty_cell), Error);
  std::istringstream ok("a,b\n1,2\n3,4.5\n");
  const SeriesTable t = read_series_csv(ok);
  CHECK(t.names == std::vector<std::string>{"a", "b"});
  CHECK(t.values(1, 1) == 4.5);
}

TEST_CASE("csv round trip keeps the initial values") {
  const TimeSeriesMatrix x = testing_support::design_sample(1, 0.5, Innovation::Homoskedastic, 30, 91);
  std::ostringstream os;
  write_series_csv(os, x);
  std::istringstream is(os.str());
  const SeriesTable t = read_series_csv(is);
  const TimeSeriesMatrix y = TimeSeriesMatrix::from_observations(t.values, 4, t.names);
  CHECK((y.values() - x.values()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((y.presample() - x.presample()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("joint report on a large simulated sample") {
  int hits = 0;
  const int runs = 20;
  for (int rep = 0; rep < runs; ++rep) {
    const TimeSeriesMatrix x = testing_support::design_sample(1, 0.5, Innovation::SingleBreak, 400, 92, rep);
    RunConfig cfg;
    cfg.input = "simulated";
    cfg.penalties = {Penalty::BIC};
    const nlohmann::json rep_json = run_analysis(cfg, x);
    hits += rep_json["selection"]["k"] == 2 && rep_json["selection"]["r"] == 1;
  }
  CHECK(hits >= 0.95 * runs);
}

TEST_CASE("report sections and replayable config") {
  const TimeSeriesMatrix x = testing_support::design_sample(1, 0.5, Innovation::StochasticVolatility, 100, 93);
  RunConfig cfg;
  cfg.input = temp_csv(x, "sections");
  cfg.mode = AnalysisMode::SequentialPLR;
  cfg.B = 19;
  cfg.seed = 7;
  const TimeSeriesMatrix loaded = load_series(cfg);
  CHECK(loaded.T() == 100);
  const nlohmann::json a = run_analysis(cfg, loaded);
  for (const char* key : {"config", "data", "volatility", "lag_selection", "rank_selection",
                          "joint_selection", "bootstrap", "selection", "surfaces", "warnings"})
    CHECK(a.contains(key));
  CHECK(a["config"]["seed"] == 7);
  CHECK(a["lag_selection"].size() == 4);
  CHECK(a["rank_selection"].size() == 16);
  for (const auto& b : a["bootstrap"])
    for (const auto& t : b["tests"]) {
      CHECK(t["pvalue"].get<double>() > 0.0);
      CHECK(t["pvalue"].get<double>() <= 1.0);
    }
  // Same config, same report.
  CHECK(run_analysis(cfg, loaded).dump() == a.dump());

  std::ostringstream md;
  write_markdown_report(md, a);
  CHECK(md.str().find("## Bootstrap rank tests") != std::string::npos);
  std::remove(cfg.input.c_str());
}

TEST_CASE("p = 1 with white-noise increments: bootstrap size") {
  int rejections = 0;
  const int runs = 60;
  for (int s = 0; s < runs; ++s) {
    const TimeSeriesMatrix x = testing_support::random_walk(1, 100, 4, 500 + s);
    RunConfig cfg;
    cfg.mode = AnalysisMode::SequentialPLR;
    cfg.B = 99;
    cfg.K = 2;
    cfg.seed = static_cast<std::uint64_t>(s);
    cfg.penalties = {Penalty::BIC};
    const nlohmann::json r = run_analysis(cfg, x);
    const int rh = r["selection"]["r"];
    CHECK((rh == 0 || rh == 1));
    rejections += rh == 1;
  }
  CHECK(rejections <= 0.15 * runs);
}

TEST_CASE("config validation") {
  RunConfig cfg;
  cfg.eta = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.eta = 0.05;
  cfg.penalties.clear();
  CHECK_THROWS_AS(cfg.validate(), Error);
  CHECK_THROWS_AS(parse_analysis_mode("both"), Error);
  CHECK(parse_analysis_mode("sequential-plr") == AnalysisMode::SequentialPLR);
}
