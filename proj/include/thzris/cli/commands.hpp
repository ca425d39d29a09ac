#pragma once

// Subcommands of the thz-ris-planner tool. Each command reads a
// ScenarioConfig, writes a summary table to `out` (CSV or JSON) and, when an
// output directory is given, CSV data files and optional SVG plots.
//
// Exit codes: 0 success, 1 usage/config error, 2 physics/feasibility failure
// (link does not close, unreachable geometry).

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "thzris/aperture.hpp"
#include "thzris/core.hpp"
#include "thzris/io/config.hpp"
#include "thzris/io/csv.hpp"
#include "thzris/io/svg.hpp"
#include "thzris/link_budget.hpp"
#include "thzris/power.hpp"
#include "thzris/radiation.hpp"
#include "thzris/surface.hpp"

namespace thzris::cli {

enum class OutputFormat { Csv, Json };

struct Options {
  std::optional<std::filesystem::path> out_dir;
  OutputFormat format = OutputFormat::Csv;
  bool svg = false;
  bool export_profiles = false;
  int threads = 0;
};

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_infeasible = 2 };

// ---------------------------------------------------------------------------
// Summary tables

using Cell = std::variant<double, long long, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

namespace detail {

inline std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return io::format_number(v);
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return v;
      },
      c);
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, c);
}

}  // namespace detail

inline void write_table(std::ostream& out, const Table& table, OutputFormat format) {
  if (format == OutputFormat::Json) {
    auto row_json = [&](const std::vector<Cell>& row) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < table.columns.size() && i < row.size(); ++i)
        obj[table.columns[i]] = detail::cell_json(row[i]);
      return obj;
    };
    nlohmann::ordered_json doc;
    if (table.rows.size() == 1) {
      doc = row_json(table.rows.front());
    } else {
      doc = nlohmann::ordered_json::array();
      for (const auto& row : table.rows) doc.push_back(row_json(row));
    }
    out << doc.dump(2) << '\n';
    return;
  }
  io::CsvWriter csv(out, table.columns);
  for (const auto& row : table.rows) {
    auto r = csv.row();
    for (const auto& c : row) r << detail::cell_text(c);
  }
}

// ---------------------------------------------------------------------------
// Output files

class OutputSink {
public:
  explicit OutputSink(const Options& options) : options_(options) {
    if (options_.out_dir) std::filesystem::create_directories(*options_.out_dir);
  }

  bool enabled() const noexcept { return options_.out_dir.has_value(); }
  bool svg() const noexcept { return enabled() && options_.svg; }

  void write(const std::string& name, const std::function<void(std::ostream&)>& fill) const {
    if (!enabled()) return;
    const auto path = *options_.out_dir / name;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot write " + path.string());
    fill(file);
  }

  void write_text(const std::string& name, const std::string& text) const {
    write(name, [&](std::ostream& o) { o << text; });
  }

private:
  const Options& options_;
};

// ---------------------------------------------------------------------------
// Config -> domain objects

namespace detail {

inline Frequency design_frequency(const io::ScenarioConfig& cfg) {
  if (cfg.has("aperture", "design_frequency")) return Frequency(cfg.frequency_hz("aperture", "design_frequency"));
  if (cfg.has("link", "frequency")) return Frequency(cfg.frequency_hz("link", "frequency"));
  cfg.fail("aperture", "design_frequency", "missing design frequency ([aperture] design_frequency or [link] frequency)");
}

inline Direction direction(const io::ScenarioConfig& cfg, const std::string& theta_key, const std::string& phi_key) {
  const double theta = cfg.has("link", theta_key) ? cfg.angle_rad("link", theta_key) : 0.0;
  const double phi = cfg.has("link", phi_key) ? cfg.angle_rad("link", phi_key) : 0.0;
  if (theta < -pi / 2.0 || theta > pi / 2.0) cfg.fail("link", theta_key, theta_key + " must lie in [-90, 90] deg");
  return Direction::signed_elevation(theta, phi);
}

inline Direction incident(const io::ScenarioConfig& cfg) { return direction(cfg, "theta_in", "phi_in"); }
inline Direction outgoing(const io::ScenarioConfig& cfg) { return direction(cfg, "theta_out", "phi_out"); }

inline LinkScenario link_scenario(const io::ScenarioConfig& cfg) {
  cfg.require_section("link");
  LinkScenario s;
  s.frequency = Frequency(cfg.frequency_hz("link", "frequency"));
  s.geometry.d1 = cfg.length_m("link", "d1");
  s.geometry.d2 = cfg.length_m("link", "d2");
  s.geometry.incident = incident(cfg);
  s.geometry.outgoing = outgoing(cfg);
  s.tx_power_dbm = cfg.power_dbm("link", "tx_power");
  s.bs_gain_dbi = cfg.gain_dbi("link", "bs_gain");
  s.terminal_gain_dbi = cfg.gain_dbi("link", "terminal_gain");
  if (!(s.geometry.d1 > 0.0)) cfg.fail("link", "d1", "d1 must be positive");
  if (!(s.geometry.d2 > 0.0)) cfg.fail("link", "d2", "d2 must be positive");
  return s;
}

inline Modulation parse_modulation(const io::ScenarioConfig& cfg) {
  const std::string raw = io::detail::lower(cfg.text("receiver", "modulation"));
  if (raw == "bpsk") return {2};
  if (raw == "qpsk") return {4};
  std::string digits;
  for (char c : raw) {
    if (std::isdigit(static_cast<unsigned char>(c))) digits += c;
    else break;
  }
  std::string rest = raw.substr(digits.size());
  if (!rest.empty() && rest.front() == '-') rest.erase(0, 1);
  if (digits.empty() || rest != "qam") cfg.fail("receiver", "modulation", "modulation must look like '4-QAM', 'QPSK' or 'BPSK'");
  return {std::stoi(digits)};
}

inline ReceiverSpec receiver(const io::ScenarioConfig& cfg) {
  cfg.require_section("receiver");
  ReceiverSpec r;
  r.bandwidth_hz = cfg.frequency_hz("receiver", "bandwidth");
  r.noise_figure_db = cfg.decibel("receiver", "noise_figure");
  r.modulation = parse_modulation(cfg);
  if (cfg.has("receiver", "target_ber")) r.target_ber = cfg.number("receiver", "target_ber");
  if (cfg.has("receiver", "implementation_loss")) r.implementation_loss_db = cfg.decibel("receiver", "implementation_loss");
  try {
    r.validate();
    (void)required_snr_db(r.modulation, r.target_ber);
  } catch (const InvalidArgument& e) {
    cfg.fail("receiver", "modulation", e.what());
  }
  return r;
}

/// Explicit [receiver] sensitivity when given, otherwise derived from the
/// modulation, noise figure and bandwidth.
inline double sensitivity_dbm(const io::ScenarioConfig& cfg) {
  if (cfg.has("receiver", "sensitivity")) return cfg.power_dbm("receiver", "sensitivity");
  return sensitivity(receiver(cfg));
}

inline double efficiency(const io::ScenarioConfig& cfg, double fallback) {
  if (!cfg.has("aperture", "efficiency")) return fallback;
  const double eta = cfg.fraction("aperture", "efficiency");
  if (!(eta > 0.0 && eta <= 1.0)) cfg.fail("aperture", "efficiency", "efficiency must lie in (0, 1]");
  return eta;
}

inline double cell_pitch(const io::ScenarioConfig& cfg, Frequency f0) {
  if (!cfg.has("aperture", "pitch")) return f0.wavelength() / 2.0;
  const double pitch = cfg.length_m("aperture", "pitch");
  if (!(pitch > 0.0)) cfg.fail("aperture", "pitch", "pitch must be positive");
  return pitch;
}

inline ApertureSpec aperture(const io::ScenarioConfig& cfg, Frequency f0, double default_efficiency = 1.0) {
  cfg.require_section("aperture");
  const double pitch = cell_pitch(cfg, f0);
  const double eta = efficiency(cfg, default_efficiency);
  if (cfg.has("aperture", "side") && cfg.has("aperture", "cells"))
    cfg.fail("aperture", "cells", "give either 'side' or 'cells', not both");
  if (cfg.has("aperture", "cells")) {
    const auto cells = cfg.integer("aperture", "cells");
    if (cells < 1) cfg.fail("aperture", "cells", "cells must be >= 1");
    return ApertureSpec(static_cast<double>(cells) * pitch, pitch, f0, eta);
  }
  const double side = cfg.length_m("aperture", "side");
  if (!(side >= pitch)) cfg.fail("aperture", "side", "side must be at least one cell pitch");
  return ApertureSpec(side, pitch, f0, eta);
}

inline CountMode count_mode(const io::ScenarioConfig& cfg) {
  if (!cfg.has("aperture", "count_mode")) return CountMode::RoundArea;
  const auto mode = io::detail::lower(cfg.text("aperture", "count_mode"));
  if (mode == "round") return CountMode::RoundArea;
  if (mode == "floor") return CountMode::FloorPerAxis;
  cfg.fail("aperture", "count_mode", "count_mode must be 'round' or 'floor'");
}

inline TaperSpec taper(const io::ScenarioConfig& cfg) {
  if (!cfg.has("taper", "edge_level")) return TaperSpec::uniform();
  TaperSpec t{cfg.decibel("taper", "edge_level")};
  if (t.edge_level_db > 0.0) cfg.fail("taper", "edge_level", "edge_level must be <= 0 dB");
  return t;
}

/// Quantization settings; nullopt stands for continuous phases.
inline std::vector<std::optional<int>> quantization_settings(const io::ScenarioConfig& cfg) {
  std::vector<std::optional<int>> out;
  if (!cfg.has("quantization", "bits")) return {std::nullopt};
  for (const auto& item : cfg.list("quantization", "bits")) {
    const auto lowered = io::detail::lower(item);
    if (lowered == "continuous" || lowered == "inf") {
      out.push_back(std::nullopt);
      continue;
    }
    int bits = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), bits);
    if (ec != std::errc() || ptr != item.data() + item.size() || bits < 1 || bits > max_quantization_bits)
      cfg.fail("quantization", "bits", "bits must be integers in [1, 8] or 'continuous', got '" + item + "'");
    out.push_back(bits);
  }
  if (out.empty()) cfg.fail("quantization", "bits", "empty bits list");
  return out;
}

inline LevelOffset level_offset(const io::ScenarioConfig& cfg) {
  if (!cfg.has("quantization", "level_offset")) return LevelOffset::None;
  const auto v = io::detail::lower(cfg.text("quantization", "level_offset"));
  if (v == "none") return LevelOffset::None;
  if (v == "half") return LevelOffset::HalfLevel;
  cfg.fail("quantization", "level_offset", "level_offset must be 'none' or 'half'");
}

inline std::string setting_label(const std::optional<int>& bits) {
  return bits ? std::to_string(*bits) + "bit" : std::string("continuous");
}

inline DirectivityOptions directivity_options(const io::ScenarioConfig& cfg, const Options& options) {
  DirectivityOptions d;
  d.threads = options.threads;
  if (cfg.has("pattern", "lobe_resolution")) d.lobe_resolution = cfg.angle_rad("pattern", "lobe_resolution");
  if (cfg.has("pattern", "background_resolution"))
    d.background_resolution = cfg.angle_rad("pattern", "background_resolution");
  return d;
}

inline std::filesystem::path relative_to_config(const io::ScenarioConfig& cfg, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return p;
  return std::filesystem::path(cfg.source()).parent_path() / p;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// link-budget

inline int cmd_link_budget(const io::ScenarioConfig& cfg, const Options& options, std::ostream& out,
                           std::ostream& err) {
  cfg.require_section("link");
  cfg.require_section("receiver");
  const LinkScenario s = detail::link_scenario(cfg);
  const double sens = detail::sensitivity_dbm(cfg);
  double sigma_dbsm = 0.0;
  if (cfg.has("link", "rcs")) {
    sigma_dbsm = cfg.rcs_dbsm("link", "rcs");
  } else if (cfg.has_section("aperture")) {
    const auto a = detail::aperture(cfg, s.frequency);
    const double sigma = rcs(a, s.geometry.incident, s.geometry.outgoing);
    if (!(sigma > 0.0)) throw InfeasibleError("unreachable geometry: zero RCS at grazing angle");
    sigma_dbsm = linear_to_db(sigma);
  } else {
    cfg.fail("link", "rcs", "link-budget needs [link] rcs or an [aperture] section");
  }
  const LinkReport report = evaluate_link(s, sigma_dbsm, sens);

  Table table;
  table.columns = {"rx_power_dbm", "sensitivity_dbm", "margin_db", "spreading_term_db", "rcs_dbsm", "link_closes"};
  table.add({report.rx_power_dbm, report.sensitivity_dbm, report.margin_db, report.spreading_term_db, report.rcs_dbsm,
             report.closes()});
  write_table(out, table, options.format);
  OutputSink sink(options);
  sink.write("link_budget.csv", [&](std::ostream& o) { write_table(o, table, OutputFormat::Csv); });
  if (!report.closes()) {
    err << "link does not close: margin " << io::format_number(report.margin_db) << " dB\n";
    return exit_infeasible;
  }
  return exit_ok;
}

// ---------------------------------------------------------------------------
// solve-aperture

inline int cmd_solve_aperture(const io::ScenarioConfig& cfg, const Options& options, std::ostream& out,
                              std::ostream& err) {
  cfg.require_section("link");
  cfg.require_section("receiver");
  cfg.require_section("aperture");
  const LinkScenario s = detail::link_scenario(cfg);
  const double sens = detail::sensitivity_dbm(cfg);
  if (!cfg.has("aperture", "efficiency")) cfg.fail("aperture", "efficiency", "solve-aperture needs [aperture] efficiency");
  const double eta = detail::efficiency(cfg, 1.0);
  const double sigma_dbsm = required_rcs_dbsm(s, sens);
  const double sigma = db_to_linear(sigma_dbsm);
  const Direction in = s.geometry.incident;
  const Direction outd = s.geometry.outgoing;
  const double side = solve_aperture_size(sigma, eta, in, outd, s.frequency);
  const double projection = projection_factor(in) * projection_factor(outd);
  if (projection < 0.05)
    err << "warning: near-grazing geometry (cos product " << io::format_number(projection)
        << "); the solved aperture is very large\n";
  const double pitch = detail::cell_pitch(cfg, s.frequency);
  if (side < pitch) throw InfeasibleError("solved aperture is smaller than one cell pitch");
  const ApertureSpec a(side, pitch, s.frequency, eta);
  const auto count = element_count(a, detail::count_mode(cfg));

  Table table;
  table.columns = {"sensitivity_dbm", "sigma_dbsm", "sigma_m2", "efficiency", "D_m", "cell_pitch_m", "n_elements",
                   "fraunhofer_distance_m"};
  table.add({sens, sigma_dbsm, sigma, eta, side, pitch, static_cast<long long>(count),
             fraunhofer_distance(side, s.frequency)});
  write_table(out, table, options.format);
  OutputSink sink(options);
  sink.write("solve_aperture.csv", [&](std::ostream& o) { write_table(o, table, OutputFormat::Csv); });
  return exit_ok;
}

// ---------------------------------------------------------------------------
// pattern

inline int cmd_pattern(const io::ScenarioConfig& cfg, const Options& options, std::ostream& out, std::ostream&) {
  cfg.require_section("aperture");
  cfg.require_section("taper");
  cfg.require_section("quantization");
  const Frequency f0 = detail::design_frequency(cfg);
  const ApertureSpec a = detail::aperture(cfg, f0);
  const TaperSpec taper = detail::taper(cfg);
  const Direction in = detail::incident(cfg);
  const Direction target = detail::outgoing(cfg);
  const auto settings = detail::quantization_settings(cfg);
  const LevelOffset offset = detail::level_offset(cfg);
  const DirectivityOptions dopts = detail::directivity_options(cfg, options);
  const double cut_step = cfg.has("pattern", "cut_step") ? cfg.angle_rad("pattern", "cut_step") : deg_to_rad(0.1);
  if (!(cut_step > 0.0)) cfg.fail("pattern", "cut_step", "cut_step must be positive");
  const double plane_phi = target.theta() > 0.0 ? target.phi() : 0.0;

  const PhaseProfile continuous = synthesize_profile(a, in, target, taper);
  const OutputSink sink(options);
  const double continuous_peak = directivity(continuous, f0, dopts).peak_directivity_dbi;

  Table table;
  table.columns = {"quantization", "peak_directivity_dbi", "peak_theta_deg", "peak_phi_deg", "loss_db",
                   "analytical_loss_db"};
  io::LinePlot plot;
  plot.title = "Directivity cut, phi = " + io::detail::fmt(rad_to_deg(plane_phi)) + " deg";
  plot.x_label = "theta (deg)";
  plot.y_label = "directivity (dBi)";
  for (const auto& bits : settings) {
    const PhaseProfile profile = bits ? quantize_profile(continuous, *bits, offset) : continuous;
    const RadiationPattern d = directivity(profile, f0, dopts);
    const PatternCut cut = principal_cut(profile, f0, plane_phi, d.radiated_power, cut_step, options.threads);
    const std::string label = detail::setting_label(bits);
    table.add({label, d.peak_directivity_dbi, rad_to_deg(d.peak_direction.theta()),
               rad_to_deg(d.peak_direction.phi()), continuous_peak - d.peak_directivity_dbi,
               bits ? analytical_quantization_loss_db(*bits) : 0.0});
    sink.write("pattern_" + label + ".csv", [&](std::ostream& o) {
      io::CsvWriter csv(o, {"theta_deg", "phi_deg", "directivity_dbi"});
      for (std::size_t i = 0; i < cut.elevation.size(); ++i)
        csv.row() << rad_to_deg(cut.elevation[i]) << rad_to_deg(plane_phi) << cut.directivity_dbi[i];
    });
    if (options.export_profiles)
      sink.write("profile_" + label + ".csv", [&](std::ostream& o) { io::write_profile_csv(o, profile); });
    io::PlotSeries series{label, {}, {}};
    for (std::size_t i = 0; i < cut.elevation.size(); ++i) {
      series.x.push_back(rad_to_deg(cut.elevation[i]));
      series.y.push_back(cut.directivity_dbi[i]);
    }
    plot.series.push_back(std::move(series));
  }
  if (!plot.series.empty()) {
    double peak = min_directivity_dbi;
    for (const auto& s : plot.series)
      for (double y : s.y) peak = std::max(peak, y);
    plot.y_floor = peak - 60.0;
  }
  write_table(out, table, options.format);
  sink.write("pattern_summary.csv", [&](std::ostream& o) { write_table(o, table, OutputFormat::Csv); });
  if (sink.svg()) sink.write_text("pattern.svg", io::render_svg(plot));
  return exit_ok;
}

// ---------------------------------------------------------------------------
// squint

namespace detail {

inline SquintOptions squint_options(const io::ScenarioConfig& cfg, const Options& options) {
  SquintOptions o;
  o.threads = options.threads;
  if (cfg.has("sweep", "span")) o.f_span_hz = cfg.frequency_hz("sweep", "span");
  if (cfg.has("sweep", "samples")) {
    const auto n = cfg.integer("sweep", "samples");
    if (n < 11 || n % 2 == 0) cfg.fail("sweep", "samples", "samples must be odd and >= 11");
    o.n_samples = static_cast<int>(n);
  }
  if (cfg.has("sweep", "normalization")) {
    const auto v = io::detail::lower(cfg.text("sweep", "normalization"));
    if (v == "uv" || v == "fft") o.normalization = PowerNormalization::UvLattice;
    else if (v == "angular" || v == "direct") o.normalization = PowerNormalization::AngularQuadrature;
    else cfg.fail("sweep", "normalization", "normalization must be 'uv' or 'angular'");
  }
  if (cfg.has("sweep", "cell_table"))
    o.cell_model = io::load_cell_table_csv(relative_to_config(cfg, cfg.text("sweep", "cell_table")).string());
  if (cfg.has_section("quantization")) {
    const auto settings = quantization_settings(cfg);
    if (settings.size() != 1) cfg.fail("quantization", "bits", "squint takes a single quantization setting");
    o.bits = settings.front();
    o.level_offset = level_offset(cfg);
  }
  if (o.cell_model && !o.bits) cfg.fail("sweep", "cell_table", "a cell table needs a quantized profile");
  return o;
}

/// Sweep that widens the span (keeping the sample spacing) until the -3 dB
/// points fall inside it.
inline SquintReport squint_auto_span(const ApertureSpec& a, const Direction& in, const Direction& target,
                                     const TaperSpec& taper, SquintOptions o) {
  const double f0 = a.design_frequency().hertz();
  const double spacing = o.f_span_hz / (o.n_samples - 1);
  for (;;) {
    try {
      return squint_sweep(a, in, target, taper, o);
    } catch (const BandEdgeError&) {
      const double wider = std::min(o.f_span_hz * 1.5, 0.95 * f0);
      if (!(wider > o.f_span_hz)) throw;
      o.f_span_hz = wider;
      int n = static_cast<int>(std::ceil(wider / spacing)) + 1;
      if (n % 2 == 0) ++n;
      o.n_samples = std::max(o.n_samples, n);
    }
  }
}

}  // namespace detail

inline int cmd_squint(const io::ScenarioConfig& cfg, const Options& options, std::ostream& out, std::ostream&) {
  cfg.require_section("aperture");
  cfg.require_section("sweep");
  const Frequency f0 = detail::design_frequency(cfg);
  const ApertureSpec a = detail::aperture(cfg, f0);
  const TaperSpec taper = detail::taper(cfg);
  const Direction in = detail::incident(cfg);
  const SquintOptions sopts = detail::squint_options(cfg, options);
  const OutputSink sink(options);

  if (cfg.has("sweep", "theta_out_sweep")) {
    const auto items = cfg.list("sweep", "theta_out_sweep");
    if (items.size() != 3) cfg.fail("sweep", "theta_out_sweep", "theta_out_sweep takes 'start, stop, step' angles");
    const auto angle = [&](const std::string& text) {
      const auto q = io::ScenarioConfig::parse_quantity(text);
      if (!q || (q->second != "deg" && q->second != "rad"))
        cfg.fail("sweep", "theta_out_sweep", "theta_out_sweep entries need deg or rad units");
      return q->second == "deg" ? q->first : rad_to_deg(q->first);
    };
    // Stepped in degrees so the emitted angles stay exact.
    const double start = angle(items[0]), stop = angle(items[1]), step = angle(items[2]);
    if (!(step > 0.0) || stop < start || start < 0.0 || stop >= 90.0)
      cfg.fail("sweep", "theta_out_sweep", "theta_out_sweep needs 0 <= start <= stop < 90 deg and step > 0");
    const double phi_out = cfg.has("link", "phi_out") ? cfg.angle_rad("link", "phi_out") : 0.0;

    Table table;
    table.columns = {"theta_out_deg", "bw_3db_hz", "fractional_bw_percent", "f_span_hz", "saturated"};
    io::PlotSeries series{"BW_3dB", {}, {}};
    bool decreasing = true;
    double previous = 0.0;
    const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) {
      const double theta_deg = start + i * step;
      const Direction target(deg_to_rad(theta_deg), phi_out);
      const SquintReport r = detail::squint_auto_span(a, in, target, taper, sopts);
      const double span = r.freq_samples_hz.back() - r.freq_samples_hz.front();
      table.add({theta_deg, r.bw_3db_hz, r.fractional_bw_percent(), span, r.saturated});
      if (i > 0 && !(r.bw_3db_hz < previous)) decreasing = false;
      previous = r.bw_3db_hz;
      series.x.push_back(theta_deg);
      series.y.push_back(r.bw_3db_hz / 1e9);
    }
    write_table(out, table, options.format);
    sink.write("squint_vs_theta.csv", [&](std::ostream& o) { write_table(o, table, OutputFormat::Csv); });
    if (sink.svg()) {
      io::LinePlot plot{"Beam-squint bandwidth vs reflection angle", "theta_out (deg)", "BW_3dB (GHz)", {series}, {}};
      sink.write_text("squint_vs_theta.svg", io::render_svg(plot));
    }
    if (!decreasing) out << "# note: BW_3dB is not strictly decreasing over the sweep\n";
    return exit_ok;
  }

  const Direction target = detail::outgoing(cfg);
  const SquintReport r = squint_sweep(a, in, target, taper, sopts);
  Table table;
  table.columns = {"theta_out_deg", "bw_3db_hz", "fractional_bw_percent", "gain_at_f0_dbi", "lower_edge_hz",
                   "upper_edge_hz", "saturated"};
  table.add({rad_to_deg(target.theta()), r.bw_3db_hz, r.fractional_bw_percent(), r.gain_at_design_db(),
             r.lower_edge_hz, r.upper_edge_hz, r.saturated});
  write_table(out, table, options.format);
  sink.write("squint.csv", [&](std::ostream& o) {
    io::CsvWriter csv(o, {"freq_hz", "gain_db"});
    for (std::size_t i = 0; i < r.freq_samples_hz.size(); ++i) csv.row() << r.freq_samples_hz[i] << r.gain_at_target_db[i];
  });
  sink.write("squint_summary.csv", [&](std::ostream& o) { write_table(o, table, OutputFormat::Csv); });
  if (sink.svg()) {
    io::PlotSeries series{"gain at target", {}, {}};
    for (std::size_t i = 0; i < r.freq_samples_hz.size(); ++i) {
      series.x.push_back(r.freq_samples_hz[i] / 1e9);
      series.y.push_back(r.gain_at_target_db[i]);
    }
    io::LinePlot plot{"Gain at theta_out = " + io::detail::fmt(rad_to_deg(target.theta())) + " deg vs frequency",
                      "frequency (GHz)", "gain (dBi)", {series}, {r.lower_edge_hz / 1e9, r.upper_edge_hz / 1e9}};
    sink.write_text("squint.svg", io::render_svg(plot));
  }
  return exit_ok;
}

// ---------------------------------------------------------------------------
// power

inline int cmd_power(const io::ScenarioConfig& cfg, const Options& options, std::ostream& out, std::ostream&) {
  cfg.require_section("power");
  auto profiles = bundled_technology_profiles();
  for (const auto& section : cfg.power_profile_sections()) {
    TechnologyProfile p;
    p.name = section.substr(io::power_profile_prefix.size());
    p.per_cell_power_w = cfg.power_w(section, "per_cell_power");
    if (cfg.has(section, "switches")) p.switches_per_cell = static_cast<int>(cfg.integer(section, "switches"));
    if (cfg.has(section, "notes")) p.notes = cfg.text(section, "notes");
    try {
      p.validate();
    } catch (const InvalidArgument& e) {
      cfg.fail(section, "per_cell_power", e.what());
    }
    profiles[p.name] = p;
  }

  long long cells = 0;
  if (cfg.has("power", "cells")) {
    cells = cfg.integer("power", "cells");
    if (cells < 1) cfg.fail("power", "cells", "cells must be >= 1");
  } else if (cfg.has_section("link") && cfg.has_section("receiver") && cfg.has("aperture", "efficiency") &&
             !cfg.has("aperture", "side") && !cfg.has("aperture", "cells")) {
    const LinkScenario s = detail::link_scenario(cfg);
    const double sigma = db_to_linear(required_rcs_dbsm(s, detail::sensitivity_dbm(cfg)));
    const double eta = detail::efficiency(cfg, 1.0);
    const double side = solve_aperture_size(sigma, eta, s.geometry.incident, s.geometry.outgoing, s.frequency);
    cells = element_count(ApertureSpec(side, detail::cell_pitch(cfg, s.frequency), s.frequency, eta),
                          detail::count_mode(cfg));
  } else if (cfg.has_section("aperture")) {
    cells = element_count(detail::aperture(cfg, detail::design_frequency(cfg)), detail::count_mode(cfg));
  } else {
    cfg.fail("power", "cells", "power needs [power] cells, a solvable link, or an [aperture]");
  }

  std::vector<std::string> names;
  if (cfg.has("power", "profiles")) names = cfg.list("power", "profiles");
  else for (const auto& [name, _] : profiles) names.push_back(name);
  Table table;
  table.columns = {"profile", "cells", "per_cell_power_w", "switches_per_cell", "panel_power_w"};
  for (const auto& name : names) {
    const auto it = profiles.find(name);
    if (it == profiles.end()) cfg.fail("power", "profiles", "unknown technology profile '" + name + "'");
    table.add({name, cells, it->second.per_cell_power_w, static_cast<long long>(it->second.switches_per_cell),
               panel_power(cells, it->second)});
  }
  write_table(out, table, options.format);
  OutputSink(options).write("power.csv", [&](std::ostream& o) { write_table(o, table, OutputFormat::Csv); });
  return exit_ok;
}

// ---------------------------------------------------------------------------

inline const std::map<std::string, std::function<int(const io::ScenarioConfig&, const Options&, std::ostream&,
                                                     std::ostream&)>>&
commands() {
  static const std::map<std::string, std::function<int(const io::ScenarioConfig&, const Options&, std::ostream&,
                                                       std::ostream&)>>
      table = {{"link-budget", cmd_link_budget},
               {"solve-aperture", cmd_solve_aperture},
               {"pattern", cmd_pattern},
               {"squint", cmd_squint},
               {"power", cmd_power}};
  return table;
}

/// Runs a subcommand on an already-loaded config and maps failures to exit codes.
inline int run(const std::string& command, const io::ScenarioConfig& cfg, const Options& options, std::ostream& out,
               std::ostream& err) {
  const auto it = commands().find(command);
  if (it == commands().end()) {
    err << "error: unknown command '" << command << "'\n";
    return exit_usage;
  }
  try {
    return it->second(cfg, options, out, err);
  } catch (const io::ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const UnderResolvedError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const BandEdgeError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << '\n';
    return exit_infeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
}

/// Loads the config at `path` and runs `command`.
inline int run_file(const std::string& command, const std::string& path, const Options& options, std::ostream& out,
                    std::ostream& err) {
  try {
    return run(command, io::ScenarioConfig::load(path), options, out, err);
  } catch (const io::ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
}

}  // namespace thzris::cli
