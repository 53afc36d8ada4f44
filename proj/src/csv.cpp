#include "acoint/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace acoint {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

[[noreturn]] void parse_error(int line, const std::string& what) {
  throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

SeriesTable read_series_csv(std::istream& in) {
  SeriesTable table;
  std::string line;
  int line_no = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (table.names.empty()) {
      for (const auto& c : cells) {
        if (c.empty()) parse_error(line_no, "empty series name in header");
        table.names.push_back(c);
      }
      continue;
    }
    if (cells.size() != table.names.size())
      parse_error(line_no, "expected " + std::to_string(table.names.size()) +
                               " fields, found " + std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const std::string& c = cells[j];
      if (c.empty() || c == "NA" || c == "NaN" || c == "nan")
        parse_error(line_no, "missing value in column '" + table.names[j] + "'");
      double v = 0.0;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size() || !std::isfinite(v))
        parse_error(line_no, "cannot parse '" + c + "' as a number");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (table.names.empty()) throw Error(ErrorKind::Parse, "empty input: no header");
  if (rows.empty()) throw Error(ErrorKind::Parse, "no data rows");
  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(table.names.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return table;
}

SeriesTable read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
  return read_series_csv(in);
}

void write_series_csv(std::ostream& out, const std::vector<std::string>& names,
                      const Matrix& values) {
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    if (j) out << ',';
    out << (j < static_cast<Eigen::Index>(names.size()) ? names[j]
                                                        : "x" + std::to_string(j + 1));
  }
  out << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j) out << ',';
      out << values(i, j);
    }
    out << '\n';
  }
}

void write_series_csv(std::ostream& out, const TimeSeriesMatrix& data) {
  Matrix all(data.presample_rows() + data.T(), data.p());
  all << data.presample(), data.values();
  write_series_csv(out, data.names(), all);
}

}  // namespace acoint
