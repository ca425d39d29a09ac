#pragma once

// Programmed reflection profiles of the surface: anomalous-reflection phase
// gradients wrapped at the design frequency, b-bit phase quantization,
// illumination taper, unit-cell response tables and flat beam codebooks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "thzris/aperture.hpp"
#include "thzris/core.hpp"

namespace thzris {

using Complex = std::complex<double>;

inline constexpr int max_quantization_bits = 8;

/// Frequency query outside the sampled range of a unit-cell table.
class OutOfBandError : public Error {
public:
  using Error::Error;
};

/// Amplitude illumination with a given level at the aperture edge.
struct TaperSpec {
  double edge_level_db = 0.0;

  static TaperSpec uniform() { return {0.0}; }

  void validate() const {
    detail::require(std::isfinite(edge_level_db) && edge_level_db <= 0.0,
                    "TaperSpec: edge level must be <= 0 dB");
  }

  /// Raised cosine on a pedestal over the aperture radius. `radius_fraction`
  /// is r / (D/2); beyond the edge the pedestal level is held.
  double amplitude(double radius_fraction) const {
    const double pedestal = db_to_amplitude(edge_level_db);
    const double t = std::clamp(radius_fraction, 0.0, 1.0);
    const double c = std::cos(0.5 * pi * t);
    return pedestal + (1.0 - pedestal) * c * c;
  }
};

enum class LevelOffset {
  None,       // levels 2πm / 2^b
  HalfLevel,  // levels shifted by π / 2^b
};

class UnitCellTable;

struct ElementPosition {
  double x = 0.0;
  double y = 0.0;
};

/// Per-element reflection coefficients of a rectangular panel, row-major.
/// Row index runs along y, column index along x; positions are relative to
/// the panel centre. Immutable once built.
class PhaseProfile {
public:
  struct Layout {
    int rows = 1;
    int cols = 1;
    double pitch_x = 0.0;
    double pitch_y = 0.0;
  };

  /// Profile on a uniform lattice centred on the origin.
  PhaseProfile(Layout layout, std::vector<Complex> coefficients, Frequency design_frequency)
      : PhaseProfile(layout, lattice_positions(layout), std::move(coefficients), design_frequency) {}

  /// Profile with explicit element positions (which may deviate from the lattice).
  PhaseProfile(Layout layout, std::vector<ElementPosition> positions, std::vector<Complex> coefficients,
               Frequency design_frequency)
      : layout_(layout),
        positions_(std::move(positions)),
        coefficients_(std::move(coefficients)),
        design_(design_frequency) {
    detail::require(layout.rows >= 1 && layout.cols >= 1, "PhaseProfile: grid must be at least 1x1");
    detail::require(layout.pitch_x > 0.0 && layout.pitch_y > 0.0, "PhaseProfile: pitch must be positive");
    const auto n = static_cast<std::size_t>(layout.rows) * static_cast<std::size_t>(layout.cols);
    detail::require(positions_.size() == n && coefficients_.size() == n,
                    "PhaseProfile: coefficient count does not match grid");
    for (const auto& c : coefficients_)
      detail::require(std::abs(c) <= 1.0 + 1e-12, "PhaseProfile: coefficient magnitude exceeds 1");
    illumination_.resize(n);
    phases_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      illumination_[i] = std::abs(coefficients_[i]);
      phases_[i] = wrap_two_pi(std::arg(coefficients_[i]));
    }
  }

  static std::vector<ElementPosition> lattice_positions(const Layout& layout) {
    std::vector<ElementPosition> out;
    out.reserve(static_cast<std::size_t>(layout.rows) * layout.cols);
    for (int r = 0; r < layout.rows; ++r)
      for (int c = 0; c < layout.cols; ++c)
        out.push_back({(c - 0.5 * (layout.cols - 1)) * layout.pitch_x, (r - 0.5 * (layout.rows - 1)) * layout.pitch_y});
    return out;
  }

  const Layout& layout() const noexcept { return layout_; }
  int rows() const noexcept { return layout_.rows; }
  int cols() const noexcept { return layout_.cols; }
  std::size_t size() const noexcept { return coefficients_.size(); }
  Frequency design_frequency() const noexcept { return design_; }

  std::span<const Complex> coefficients() const noexcept { return coefficients_; }
  std::span<const ElementPosition> positions() const noexcept { return positions_; }
  /// Illumination amplitude (taper) of each element.
  std::span<const double> illumination() const noexcept { return illumination_; }
  /// Programmed phase of each element in [0, 2π).
  std::span<const double> phases() const noexcept { return phases_; }
  /// Discrete state per element; empty for a continuous profile.
  std::span<const int> states() const noexcept { return states_; }

  const Complex& at(int row, int col) const { return coefficients_.at(index(row, col)); }
  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * layout_.cols + col;
  }

  /// Number of quantization bits, or nullopt for a continuous profile.
  std::optional<int> quantization_bits() const noexcept { return bits_; }
  LevelOffset level_offset() const noexcept { return offset_; }

  /// Direction of the plane wave illuminating the panel (the incident
  /// direction the profile was synthesised for).
  const Direction& illumination_direction() const noexcept { return incident_; }
  const Direction& steering_target() const noexcept { return target_; }

  /// True when every element sits on the nominal lattice.
  bool on_uniform_lattice(double tolerance = 1e-9) const {
    const auto lattice = lattice_positions(layout_);
    const double scale = std::max(layout_.pitch_x, layout_.pitch_y) * tolerance;
    for (std::size_t i = 0; i < positions_.size(); ++i)
      if (std::abs(positions_[i].x - lattice[i].x) > scale || std::abs(positions_[i].y - lattice[i].y) > scale)
        return false;
    return true;
  }

  PhaseProfile with_steering(const Direction& incident, const Direction& target) const {
    PhaseProfile copy = *this;
    copy.incident_ = incident;
    copy.target_ = target;
    return copy;
  }

private:
  friend PhaseProfile quantize_profile(const PhaseProfile&, int, LevelOffset);
  friend PhaseProfile apply_cell_model(const PhaseProfile&, const UnitCellTable&, Frequency);

  Layout layout_;
  std::vector<ElementPosition> positions_;
  std::vector<Complex> coefficients_;
  std::vector<double> illumination_;
  std::vector<double> phases_;
  std::vector<int> states_;
  std::optional<int> bits_;
  LevelOffset offset_ = LevelOffset::None;
  Frequency design_;
  Direction incident_;
  Direction target_;
};

// ---------------------------------------------------------------------------
// Synthesis

/// Programmed phase at position (x, y) that turns a plane wave from
/// `incident` into one leaving towards `outgoing`:
/// ψ = mod(-k0 (û_out - û_in)·r, 2π).
inline double anomalous_phase(double x, double y, double wavenumber, const Direction& incident,
                              const Direction& outgoing) noexcept {
  const auto in = incident.uv();
  const auto out = outgoing.uv();
  return wrap_two_pi(-wavenumber * ((out[0] - in[0]) * x + (out[1] - in[1]) * y));
}

/// Continuous profile steering `incident` to `outgoing` at the aperture's
/// design frequency, weighted by `taper`.
inline PhaseProfile synthesize_profile(const ApertureSpec& a, const Direction& incident, const Direction& outgoing,
                                       const TaperSpec& taper) {
  taper.validate();
  const int n = a.cells_per_side();
  const PhaseProfile::Layout layout{n, n, a.cell_pitch(), a.cell_pitch()};
  const auto positions = PhaseProfile::lattice_positions(layout);
  const double k0 = a.design_frequency().wavenumber();
  const double radius = 0.5 * a.side();
  std::vector<Complex> coefficients;
  coefficients.reserve(positions.size());
  for (const auto& p : positions) {
    const double amp = taper.amplitude(std::hypot(p.x, p.y) / radius);
    coefficients.push_back(std::polar(amp, anomalous_phase(p.x, p.y, k0, incident, outgoing)));
  }
  return PhaseProfile(layout, std::move(coefficients), a.design_frequency()).with_steering(incident, outgoing);
}

// ---------------------------------------------------------------------------
// Quantization

inline double level_offset_radians(int bits, LevelOffset offset) noexcept {
  return offset == LevelOffset::HalfLevel ? pi / static_cast<double>(1 << bits) : 0.0;
}

inline std::vector<double> quantization_levels(int bits, LevelOffset offset = LevelOffset::None) {
  detail::require(bits >= 1 && bits <= max_quantization_bits, "quantization bits must lie in [1, 8]");
  const int count = 1 << bits;
  const double step = two_pi / count;
  std::vector<double> levels(count);
  for (int m = 0; m < count; ++m) levels[m] = m * step + level_offset_radians(bits, offset);
  return levels;
}

/// Index of the level nearest to `phase`; exact midpoints go to the lower index.
inline int quantize_phase_index(double phase, int bits, LevelOffset offset = LevelOffset::None) {
  const int count = 1 << bits;
  const double step = two_pi / count;
  const double t = wrap_two_pi(phase - level_offset_radians(bits, offset)) / step;
  int index = static_cast<int>(std::ceil(t - 0.5));
  if (index >= count) index -= count;
  return index;
}

inline PhaseProfile quantize_profile(const PhaseProfile& p, int bits, LevelOffset offset = LevelOffset::None) {
  if (bits < 1) throw InvalidArgument("quantize_profile: bits must be >= 1");
  if (bits > max_quantization_bits)
    throw InvalidArgument("quantize_profile: more than 8 bits is beyond practical switch counts");
  PhaseProfile out = p;
  const double step = two_pi / (1 << bits);
  const double shift = level_offset_radians(bits, offset);
  out.states_.assign(p.size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const int index = quantize_phase_index(p.phases_[i], bits, offset);
    const double level = index * step + shift;
    out.states_[i] = index;
    out.phases_[i] = wrap_two_pi(level);
    out.coefficients_[i] = std::polar(std::abs(p.coefficients_[i]), level);
  }
  out.bits_ = bits;
  out.offset_ = offset;
  return out;
}

// ---------------------------------------------------------------------------
// Unit-cell response tables

struct CellSample {
  double frequency_hz = 0.0;
  double amplitude = 1.0;
  double phase = 0.0;  // rad
};

/// Measured or simulated complex reflection of each discrete cell state,
/// sampled over frequency.
class UnitCellTable {
public:
  /// `states[i]` holds the frequency samples of state i, in increasing frequency.
  explicit UnitCellTable(std::vector<std::vector<CellSample>> states) : states_(std::move(states)) {
    detail::require(!states_.empty(), "UnitCellTable: no states");
    for (std::size_t s = 0; s < states_.size(); ++s) {
      const auto& samples = states_[s];
      detail::require(!samples.empty(), "UnitCellTable: state " + std::to_string(s) + " has no samples");
      for (std::size_t i = 0; i < samples.size(); ++i) {
        detail::require(samples[i].amplitude >= 0.0 && samples[i].amplitude <= 1.0,
                        "UnitCellTable: amplitude must lie in [0, 1]");
        detail::require(std::isfinite(samples[i].phase), "UnitCellTable: phase must be finite");
        if (i > 0)
          detail::require(samples[i].frequency_hz > samples[i - 1].frequency_hz,
                          "UnitCellTable: frequencies must be strictly increasing per state");
      }
    }
  }

  /// Frequency-flat table: state m reflects with `amplitude` at the ideal
  /// level 2πm / 2^bits over [f_lo, f_hi].
  static UnitCellTable ideal(int bits, double amplitude, double f_lo, double f_hi) {
    const auto levels = quantization_levels(bits);
    std::vector<std::vector<CellSample>> states;
    for (double level : levels) states.push_back({{f_lo, amplitude, level}, {f_hi, amplitude, level}});
    return UnitCellTable(std::move(states));
  }

  std::size_t state_count() const noexcept { return states_.size(); }
  const std::vector<CellSample>& samples(int state) const { return states_.at(static_cast<std::size_t>(state)); }

  /// Complex reflection of `state` at `f`: amplitude and unwrapped phase
  /// interpolated linearly in frequency.
  Complex response(int state, Frequency f) const {
    const auto& s = samples(state);
    const double hz = f.hertz();
    const double tol = 1e-9 * hz;
    if (hz < s.front().frequency_hz - tol || hz > s.back().frequency_hz + tol)
      throw OutOfBandError("cell model out of band: " + std::to_string(hz) + " Hz");
    if (s.size() == 1) return std::polar(s.front().amplitude, s.front().phase);
    auto upper = std::upper_bound(s.begin(), s.end(), hz,
                                  [](double v, const CellSample& c) { return v < c.frequency_hz; });
    if (upper == s.begin()) ++upper;
    if (upper == s.end()) --upper;
    const auto& hi = *upper;
    const auto& lo = *(upper - 1);
    const double t = std::clamp((hz - lo.frequency_hz) / (hi.frequency_hz - lo.frequency_hz), 0.0, 1.0);
    // Unwrap the upper sample relative to the lower one.
    const double phase_hi = lo.phase + phase_distance(hi.phase, lo.phase);
    const double amp = lo.amplitude + t * (hi.amplitude - lo.amplitude);
    return std::polar(amp, lo.phase + t * (phase_hi - lo.phase));
  }

private:
  std::vector<std::vector<CellSample>> states_;
};

/// Bundled demo table: 2-bit cell, frequency-flat, 3 dB insertion loss.
inline UnitCellTable default_cell_table() {
  return UnitCellTable::ideal(2, db_to_amplitude(-3.0), 100e9, 200e9);
}

/// Replaces the ideal quantized reflection of every element with the cell
/// table's response at `f`, keeping the illumination amplitude.
inline PhaseProfile apply_cell_model(const PhaseProfile& p, const UnitCellTable& table, Frequency f) {
  if (!p.quantization_bits())
    throw InvalidArgument("apply_cell_model: profile must be quantized first");
  if (table.state_count() != (std::size_t{1} << *p.quantization_bits()))
    throw InvalidArgument("apply_cell_model: table has " + std::to_string(table.state_count()) +
                          " states but the profile uses " + std::to_string(1 << *p.quantization_bits()));
  PhaseProfile out = p;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Complex r = table.response(p.states_[i], f);
    out.coefficients_[i] = p.illumination_[i] * r;
    out.phases_[i] = wrap_two_pi(std::arg(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Codebooks

/// One quantized far-field profile per grid direction, in grid order.
inline std::vector<PhaseProfile> generate_codebook(const ApertureSpec& a, const Direction& incident,
                                                   std::span<const Direction> grid, int bits,
                                                   const TaperSpec& taper, LevelOffset offset = LevelOffset::None) {
  detail::require(!grid.empty(), "generate_codebook: empty angular grid");
  std::vector<PhaseProfile> book;
  book.reserve(grid.size());
  for (const auto& target : grid)
    book.push_back(quantize_profile(synthesize_profile(a, incident, target, taper), bits, offset));
  return book;
}

inline std::vector<PhaseProfile> generate_codebook(const ApertureSpec& a, std::span<const Direction> grid, int bits,
                                                   const TaperSpec& taper) {
  return generate_codebook(a, Direction::broadside(), grid, bits, taper);
}

}  // namespace thzris
