#pragma once

// CSV emission (versioned header comment, fixed number formatting so that
// identical inputs produce byte-identical files), profile export and
// unit-cell table loading.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "thzris/io/config.hpp"
#include "thzris/surface.hpp"

namespace thzris::io {

inline constexpr std::string_view csv_version_line = "# thz-ris-planner v1";

/// Shortest round-trippable decimal representation of `value`.
inline std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  // Prefer a shorter representation when it round-trips.
  for (int precision = 6; precision < 17; ++precision) {
    char shorter[40];
    std::snprintf(shorter, sizeof shorter, "%.*g", precision, value);
    if (std::strtod(shorter, nullptr) == value) return shorter;
  }
  return buf;
}

class CsvWriter {
public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& columns) : out_(out), columns_(columns.size()) {
    out_ << csv_version_line << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
  }

  class Row {
  public:
    explicit Row(CsvWriter& w) : w_(w) {}
    Row(const Row&) = delete;
    Row& operator=(const Row&) = delete;
    ~Row() {
      // Pad short rows so the file stays rectangular.
      for (; count_ < w_.columns_; ++count_) w_.out_ << (count_ ? "," : "");
      w_.out_ << '\n';
    }
    Row& operator<<(double v) { return cell(format_number(v)); }
    Row& operator<<(int v) { return cell(std::to_string(v)); }
    Row& operator<<(long long v) { return cell(std::to_string(v)); }
    Row& operator<<(const std::string& v) { return cell(v); }
    Row& operator<<(const char* v) { return cell(v); }

  private:
    Row& cell(const std::string& s) {
      w_.out_ << (count_ ? "," : "") << s;
      ++count_;
      return *this;
    }
    CsvWriter& w_;
    std::size_t count_ = 0;
  };

  Row row() { return Row(*this); }

private:
  std::ostream& out_;
  std::size_t columns_;
};

/// Profile export: row, col, x_m, y_m, then state_index (quantized) or
/// phase_rad (continuous), then amplitude.
inline void write_profile_csv(std::ostream& out, const PhaseProfile& p) {
  const bool quantized = p.quantization_bits().has_value();
  CsvWriter csv(out, {"row", "col", "x_m", "y_m", quantized ? "state_index" : "phase_rad", "amplitude"});
  const auto pos = p.positions();
  const auto coeffs = p.coefficients();
  for (int r = 0; r < p.rows(); ++r)
    for (int c = 0; c < p.cols(); ++c) {
      const auto i = p.index(r, c);
      auto row = csv.row();
      row << r << c << pos[i].x << pos[i].y;
      if (quantized) row << p.states()[i];
      else row << p.phases()[i];
      row << std::abs(coeffs[i]);
    }
}

/// Reads a unit-cell table with columns freq_hz, state_index,
/// amplitude_linear, phase_rad. Comment lines start with '#'.
inline UnitCellTable read_cell_table_csv(std::istream& in, const std::string& source = "cell table") {
  std::string line;
  int line_no = 0;
  bool header = false;
  std::map<int, std::vector<CellSample>> states;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = detail::split_list(t);
    if (!header) {
      const std::vector<std::string> expected = {"freq_hz", "state_index", "amplitude_linear", "phase_rad"};
      if (fields != expected)
        throw ConfigError(source, line_no, "expected header freq_hz,state_index,amplitude_linear,phase_rad");
      header = true;
      continue;
    }
    if (fields.size() != 4) throw ConfigError(source, line_no, "expected 4 columns");
    try {
      std::size_t used = 0;
      const int state = std::stoi(fields[1], &used);
      if (used != fields[1].size() || state < 0) throw std::invalid_argument("state");
      CellSample s{std::stod(fields[0]), std::stod(fields[2]), std::stod(fields[3])};
      auto& samples = states[state];
      if (!samples.empty() && !(s.frequency_hz > samples.back().frequency_hz))
        throw ConfigError(source, line_no, "freq_hz must be strictly increasing per state");
      samples.push_back(s);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError(source, line_no, "malformed numeric field");
    }
  }
  if (!header) throw ConfigError(source, 0, "empty cell table");
  std::vector<std::vector<CellSample>> ordered;
  int expected = 0;
  for (auto& [state, samples] : states) {
    if (state != expected) throw ConfigError(source, 0, "state indices must be contiguous from 0");
    ordered.push_back(std::move(samples));
    ++expected;
  }
  try {
    return UnitCellTable(std::move(ordered));
  } catch (const InvalidArgument& e) {
    throw ConfigError(source, 0, e.what());
  }
}

inline UnitCellTable load_cell_table_csv(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError(path, 0, "cannot open cell table");
  return read_cell_table_csv(file, path);
}

}  // namespace thzris::io
