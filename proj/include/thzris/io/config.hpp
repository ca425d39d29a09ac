#pragma once

// Scenario configuration: INI-style sections holding unit-suffixed scalars.
//
//   [link]
//   frequency = 140 GHz
//   d1 = 50 m            # trailing comments are allowed
//
// Every physical quantity must carry a unit; unknown sections and keys are
// rejected with the offending line number.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thzris/core.hpp"

namespace thzris::io {

class ConfigError : public Error {
public:
  ConfigError(const std::string& source, int line, const std::string& message)
      : Error(format(source, line, message)), line_(line) {}

  int line() const noexcept { return line_; }

private:
  static std::string format(const std::string& source, int line, const std::string& message) {
    std::string out = source.empty() ? std::string("config") : source;
    if (line > 0) out += ":" + std::to_string(line);
    return out + ": " + message;
  }
  int line_;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace detail

/// Allowed keys per section. Sections named "power.<profile>" share the
/// profile schema.
inline const std::map<std::string, std::set<std::string>>& config_schema() {
  static const std::map<std::string, std::set<std::string>> schema = {
      {"link",
       {"frequency", "d1", "d2", "theta_in", "phi_in", "theta_out", "phi_out", "tx_power", "bs_gain",
        "terminal_gain", "rcs"}},
      {"receiver", {"bandwidth", "noise_figure", "modulation", "target_ber", "implementation_loss", "sensitivity"}},
      {"aperture", {"design_frequency", "side", "cells", "pitch", "efficiency", "count_mode"}},
      {"taper", {"edge_level"}},
      {"quantization", {"bits", "level_offset"}},
      {"sweep", {"span", "samples", "theta_out_sweep", "normalization", "cell_table"}},
      {"pattern", {"lobe_resolution", "background_resolution", "cut_step"}},
      {"power", {"profiles", "cells"}},
  };
  return schema;
}

inline constexpr std::string_view power_profile_prefix = "power.";

inline const std::set<std::string>& power_profile_keys() {
  static const std::set<std::string> keys = {"per_cell_power", "switches", "notes"};
  return keys;
}

/// A parsed configuration document.
class ScenarioConfig {
public:
  struct Entry {
    std::string value;
    int line = 0;
  };
  using Section = std::map<std::string, Entry>;

  static ScenarioConfig parse(std::string_view text, std::string source = "config") {
    ScenarioConfig cfg;
    cfg.source_ = std::move(source);
    std::string current;
    int current_line = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string line = raw;
      // Strip comments outside quotes.
      bool quoted = false;
      for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (!quoted && (line[i] == '#' || line[i] == ';')) {
          line.resize(i);
          break;
        }
      }
      line = detail::trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') throw ConfigError(cfg.source_, line_no, "malformed section header");
        current = detail::lower(detail::trim(std::string_view(line).substr(1, line.size() - 2)));
        current_line = line_no;
        if (!is_known_section(current)) throw ConfigError(cfg.source_, line_no, "unknown section [" + current + "]");
        if (cfg.sections_.count(current)) throw ConfigError(cfg.source_, line_no, "duplicate section [" + current + "]");
        cfg.sections_[current];
        cfg.section_lines_[current] = current_line;
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError(cfg.source_, line_no, "expected 'key = value'");
      if (current.empty()) throw ConfigError(cfg.source_, line_no, "key outside of any section");
      const std::string key = detail::lower(detail::trim(std::string_view(line).substr(0, eq)));
      std::string value = detail::trim(std::string_view(line).substr(eq + 1));
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
      if (key.empty()) throw ConfigError(cfg.source_, line_no, "empty key");
      if (!is_known_key(current, key))
        throw ConfigError(cfg.source_, line_no, "unknown key '" + key + "' in [" + current + "]");
      auto& section = cfg.sections_[current];
      if (section.count(key)) throw ConfigError(cfg.source_, line_no, "duplicate key '" + key + "'");
      section[key] = {value, line_no};
    }
    return cfg;
  }

  static ScenarioConfig load(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError(path, 0, "cannot open config file");
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse(buffer.str(), path);
  }

  const std::string& source() const noexcept { return source_; }
  bool has_section(const std::string& name) const { return sections_.count(name) != 0; }
  bool has(const std::string& section, const std::string& key) const {
    const auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) != 0;
  }

  void require_section(const std::string& name) const {
    if (!has_section(name)) throw ConfigError(source_, 0, "missing required section [" + name + "]");
  }

  const Entry& entry(const std::string& section, const std::string& key) const {
    const auto it = sections_.find(section);
    if (it == sections_.end()) throw ConfigError(source_, 0, "missing required section [" + section + "]");
    const auto kt = it->second.find(key);
    if (kt == it->second.end())
      throw ConfigError(source_, section_lines_.at(section), "missing required key '" + key + "' in [" + section + "]");
    return kt->second;
  }

  std::vector<std::string> power_profile_sections() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : sections_)
      if (name.starts_with(power_profile_prefix)) out.push_back(name);
    return out;
  }

  // -- typed accessors -----------------------------------------------------

  std::string text(const std::string& section, const std::string& key) const { return entry(section, key).value; }

  /// Frequency in Hz: Hz, kHz, MHz, GHz, THz.
  double frequency_hz(const std::string& section, const std::string& key) const {
    return quantity(section, key, {{"hz", 1.0}, {"khz", 1e3}, {"mhz", 1e6}, {"ghz", 1e9}, {"thz", 1e12}});
  }

  /// Length in metres: m, cm, mm, um.
  double length_m(const std::string& section, const std::string& key) const {
    return quantity(section, key, {{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}});
  }

  /// Angle in radians: deg, rad.
  double angle_rad(const std::string& section, const std::string& key) const {
    return quantity(section, key, {{"deg", pi / 180.0}, {"rad", 1.0}});
  }

  /// Plain ratio in dB.
  double decibel(const std::string& section, const std::string& key) const {
    return quantity(section, key, {{"db", 1.0}});
  }

  /// Antenna gain: dBi (dB accepted).
  double gain_dbi(const std::string& section, const std::string& key) const {
    return quantity(section, key, {{"dbi", 1.0}, {"db", 1.0}});
  }

  /// Power level in dBm; W, mW and uW are converted.
  double power_dbm(const std::string& section, const std::string& key) const {
    const auto& e = entry(section, key);
    const auto [number, unit] = split_quantity(e);
    if (unit == "dbm") return number;
    const std::map<std::string, double> linear = {{"w", 1.0}, {"mw", 1e-3}, {"uw", 1e-6}};
    const auto it = linear.find(unit);
    if (it == linear.end()) throw ConfigError(source_, e.line, "unit '" + unit + "' is not a power level for '" + key + "'");
    if (!(number > 0.0)) throw ConfigError(source_, e.line, "power must be positive for '" + key + "'");
    return watts_to_dbm(number * it->second);
  }

  /// Power in watts: W, mW, uW, nW.
  double power_w(const std::string& section, const std::string& key) const {
    return quantity(section, key, {{"w", 1.0}, {"mw", 1e-3}, {"uw", 1e-6}, {"nw", 1e-9}});
  }

  /// Radar cross section in dBsm; m2 is converted.
  double rcs_dbsm(const std::string& section, const std::string& key) const {
    const auto& e = entry(section, key);
    const auto [number, unit] = split_quantity(e);
    if (unit == "dbsm") return number;
    if (unit == "m2" || unit == "m^2") {
      if (!(number > 0.0)) throw ConfigError(source_, e.line, "RCS must be positive");
      return linear_to_db(number);
    }
    throw ConfigError(source_, e.line, "unit '" + unit + "' is not an RCS unit (dBsm, m2)");
  }

  /// Dimensionless fraction: plain number or percentage.
  double fraction(const std::string& section, const std::string& key) const {
    const auto& e = entry(section, key);
    const auto [number, unit] = split_quantity(e, true);
    if (unit.empty()) return number;
    if (unit == "%") return number / 100.0;
    throw ConfigError(source_, e.line, "'" + key + "' is dimensionless; unexpected unit '" + unit + "'");
  }

  double number(const std::string& section, const std::string& key) const {
    const auto& e = entry(section, key);
    const auto [value, unit] = split_quantity(e, true);
    if (!unit.empty()) throw ConfigError(source_, e.line, "'" + key + "' is dimensionless; unexpected unit '" + unit + "'");
    return value;
  }

  long long integer(const std::string& section, const std::string& key) const {
    const auto& e = entry(section, key);
    long long out = 0;
    const auto& s = e.value;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ConfigError(source_, e.line, "'" + key + "' must be an integer, got '" + s + "'");
    return out;
  }

  std::vector<std::string> list(const std::string& section, const std::string& key) const {
    return detail::split_list(entry(section, key).value);
  }

  /// Throws a ConfigError anchored at the entry's line.
  [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& message) const {
    int line = 0;
    if (has(section, key)) line = entry(section, key).line;
    else if (section_lines_.count(section)) line = section_lines_.at(section);
    throw ConfigError(source_, line, message);
  }

  /// Parses "<number> <unit>" or "<number><unit>" into a number and a
  /// lower-cased unit.
  static std::optional<std::pair<double, std::string>> parse_quantity(const std::string& text) {
    const std::string s = detail::trim(text);
    if (s.empty()) return std::nullopt;
    std::size_t pos = 0;
    double value = 0.0;
    try {
      value = std::stod(s, &pos);
    } catch (...) {
      return std::nullopt;
    }
    if (!std::isfinite(value)) return std::nullopt;
    return std::pair{value, detail::lower(detail::trim(std::string_view(s).substr(pos)))};
  }

private:
  static bool is_known_section(const std::string& name) {
    if (config_schema().count(name)) return true;
    return name.starts_with(power_profile_prefix) && name.size() > power_profile_prefix.size();
  }

  static bool is_known_key(const std::string& section, const std::string& key) {
    if (section.starts_with(power_profile_prefix)) return power_profile_keys().count(key) != 0;
    return config_schema().at(section).count(key) != 0;
  }

  std::pair<double, std::string> split_quantity(const Entry& e, bool allow_unitless = false) const {
    const auto parsed = parse_quantity(e.value);
    if (!parsed) throw ConfigError(source_, e.line, "expected a number, got '" + e.value + "'");
    if (!allow_unitless && parsed->second.empty())
      throw ConfigError(source_, e.line, "physical quantity '" + e.value + "' needs a unit");
    return *parsed;
  }

  double quantity(const std::string& section, const std::string& key, const std::map<std::string, double>& units) const {
    const auto& e = entry(section, key);
    const auto [number, unit] = split_quantity(e);
    const auto it = units.find(unit);
    if (it == units.end()) {
      std::string allowed;
      for (const auto& [name, _] : units) allowed += (allowed.empty() ? "" : ", ") + name;
      throw ConfigError(source_, e.line, "unit '" + unit + "' not accepted for '" + key + "' (expected " + allowed + ")");
    }
    return number * it->second;
  }

  std::string source_;
  std::map<std::string, Section> sections_;
  std::map<std::string, int> section_lines_;
};

}  // namespace thzris::io
