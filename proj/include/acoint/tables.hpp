#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "acoint/montecarlo.hpp"

namespace acoint {

struct TableConfig {
  int reps = 500;
  std::uint64_t seed = 1;
  std::vector<double> gammas{0.0, 0.1, 0.5, 0.9};
  std::vector<int> Ts{50, 100};
  ExperimentOptions options;
};

/// One cell group: the frequency tables for every method at a single
/// (innovation, r0, gamma, T) design point. `section` names the panel
/// ("rank", "lag", "step1", "step2", "bootstrap").
struct TableBlock {
  std::string section;
  Innovation innovation = Innovation::Homoskedastic;
  int r0 = 0;
  double gamma = 0.0;
  int T = 0;
  std::vector<FrequencyTable> tables;
};

struct TableResult {
  int id = 0;
  std::string title;
  TableConfig config;
  std::vector<TableBlock> blocks;
};

/// Titles of the six simulation tables.
std::string table_title(int id);

/// Runs the design grid of simulation table `id` (1..6).
TableResult replicate_table(int id, const TableConfig& config);

/// Long format: table,section,innovation,r0,gamma,T,method,category,percent,mc_se,count,reps,failures
void write_table_csv(std::ostream& out, const TableResult& t);

/// Aligned text: one panel per (section, innovation, r0), rows (gamma, T),
/// a column group per method.
void write_table_text(std::ostream& out, const TableResult& t);

}  // namespace acoint
