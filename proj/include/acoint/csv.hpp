#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "acoint/varmodel.hpp"

namespace acoint {

struct SeriesTable {
  std::vector<std::string> names;
  Matrix values;  ///< one row per time point
};

/// Strict reader: a header row of series names, then one numeric row per
/// time point. Ragged rows, empty cells and non-numeric cells are rejected
/// with the offending line number.
SeriesTable read_series_csv(std::istream& in);
SeriesTable read_series_csv(const std::string& path);

void write_series_csv(std::ostream& out, const std::vector<std::string>& names,
                      const Matrix& values);

/// Writes presample rows followed by the sample, which is the layout
/// read back by TimeSeriesMatrix::from_observations.
void write_series_csv(std::ostream& out, const TimeSeriesMatrix& data);

}  // namespace acoint
