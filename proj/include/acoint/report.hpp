#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "acoint/bootstrap.hpp"
#include "acoint/criteria.hpp"
#include "acoint/volatility.hpp"

namespace acoint {

enum class AnalysisMode { Joint, SequentialIC, SequentialPLR };

const char* to_string(AnalysisMode m);
AnalysisMode parse_analysis_mode(const std::string& name);

struct RunConfig {
  std::string input;
  DeterministicCase det = DeterministicCase::None;
  int K = 4;
  /// Rows of the input file used as initial values (defaults to K).
  int presample = -1;
  std::vector<Penalty> penalties{Penalty::HQC, Penalty::BIC};
  AnalysisMode mode = AnalysisMode::Joint;
  BootstrapKind scheme = BootstrapKind::VarianceBootstrap;
  int B = 399;
  double eta = 0.05;
  Multiplier multiplier = Multiplier::Gaussian;
  std::uint64_t seed = 1;
  StandardFlavor flavor = StandardFlavor::Johansen;
  Kernel kernel = Kernel::Gaussian;
  std::vector<double> grid = default_bandwidth_grid();
  bool levels_intercept = true;
  std::string json_out;
  std::string markdown_out;
  std::string volatility_out;

  void validate() const;
  nlohmann::json to_json() const;
};

/// Whole pipeline on one data set: volatility path, standard and adaptive
/// surfaces, lag/rank/joint selection for every penalty, and the bootstrap
/// rank path when mode is sequential-plr. Warnings are collected into the
/// "warnings" array.
nlohmann::json run_analysis(const RunConfig& config, const TimeSeriesMatrix& data,
                            VolatilityPath* vol_out = nullptr);

/// Reads config.input, splitting off the first `presample` rows.
TimeSeriesMatrix load_series(const RunConfig& config);

void write_markdown_report(std::ostream& out, const nlohmann::json& report);

}  // namespace acoint
