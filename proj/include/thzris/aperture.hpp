#pragma once

// Flat-plate RCS model of a square reflecting aperture, its inverse (the
// aperture size needed for a target RCS), element counts and the aperture
// efficiency ledger.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

#include "thzris/core.hpp"

namespace thzris {

enum class CountMode {
  RoundArea,     // round((D / pitch)^2)
  FloorPerAxis,  // floor(D / pitch)^2, a physically placeable layout
};

/// Square aperture of side D populated on a uniform grid.
class ApertureSpec {
public:
  ApertureSpec(double side, double cell_pitch, Frequency design_frequency, double aperture_efficiency)
      : side_(side), pitch_(cell_pitch), design_(design_frequency), efficiency_(aperture_efficiency) {
    detail::require(std::isfinite(cell_pitch) && cell_pitch > 0.0, "ApertureSpec: cell pitch must be positive");
    detail::require(std::isfinite(side) && side >= cell_pitch * (1.0 - 1e-12),
                    "ApertureSpec: side must be at least one cell pitch");
    detail::require(aperture_efficiency > 0.0 && aperture_efficiency <= 1.0,
                    "ApertureSpec: aperture efficiency must lie in (0, 1]");
  }

  /// Aperture with the default λ0/2 pitch at the design frequency.
  static ApertureSpec half_wavelength(double side, Frequency design_frequency, double aperture_efficiency = 1.0) {
    return {side, design_frequency.wavelength() / 2.0, design_frequency, aperture_efficiency};
  }

  /// Aperture holding exactly `cells_per_side` λ0/2 cells along each axis.
  static ApertureSpec from_cells(int cells_per_side, Frequency design_frequency, double aperture_efficiency = 1.0) {
    detail::require(cells_per_side >= 1, "ApertureSpec: need at least one cell per side");
    const double pitch = design_frequency.wavelength() / 2.0;
    return {cells_per_side * pitch, pitch, design_frequency, aperture_efficiency};
  }

  double side() const noexcept { return side_; }
  double cell_pitch() const noexcept { return pitch_; }
  Frequency design_frequency() const noexcept { return design_; }
  double efficiency() const noexcept { return efficiency_; }

  ApertureSpec with_efficiency(double eta) const { return {side_, pitch_, design_, eta}; }
  ApertureSpec with_side(double side) const { return {side, pitch_, design_, efficiency_}; }

  /// Cells per axis of the simulated layout: nearest integer to D / pitch.
  int cells_per_side() const noexcept {
    return std::max(1, static_cast<int>(std::lround(side_ / pitch_)));
  }

private:
  double side_;
  double pitch_;
  Frequency design_;
  double efficiency_;
};

/// cos(theta) that is exactly zero at grazing incidence.
inline double projection_factor(const Direction& d) noexcept {
  if (d.theta() >= pi / 2.0 - 1e-15) return 0.0;
  return std::cos(d.theta());
}

/// σ = η · (4π/λ²) · D⁴ · cos θ_in · cos θ_out, in m².
inline double rcs(const ApertureSpec& a, const Direction& incident, const Direction& outgoing) {
  const double lambda = a.design_frequency().wavelength();
  const double area = a.side() * a.side();
  return a.efficiency() * 4.0 * pi / (lambda * lambda) * area * area * projection_factor(incident) *
         projection_factor(outgoing);
}

/// Side D of the square aperture whose RCS equals `required_sigma` (m²).
inline double solve_aperture_size(double required_sigma, double eta, const Direction& incident,
                                  const Direction& outgoing, Frequency f) {
  detail::require(std::isfinite(required_sigma) && required_sigma > 0.0,
                  "solve_aperture_size: required RCS must be positive");
  detail::require(eta > 0.0 && eta <= 1.0, "solve_aperture_size: efficiency must lie in (0, 1]");
  const double projection = projection_factor(incident) * projection_factor(outgoing);
  if (!(projection > 0.0)) throw InfeasibleError("unreachable geometry: grazing incident or outgoing angle");
  const double lambda = f.wavelength();
  return std::pow(required_sigma * lambda * lambda / (4.0 * pi * eta * projection), 0.25);
}

inline std::int64_t element_count(const ApertureSpec& a, CountMode mode = CountMode::RoundArea) {
  const double ratio = a.side() / a.cell_pitch();
  if (mode == CountMode::FloorPerAxis) {
    const auto per_axis = static_cast<std::int64_t>(std::floor(ratio + 1e-9));
    return per_axis * per_axis;
  }
  return std::llround(ratio * ratio);
}

/// True when the aperture does not exceed the specular limit of a perfectly
/// conducting plate of the same size.
inline bool pec_bound_check(const ApertureSpec& a, const Direction& incident, const Direction& outgoing) {
  return rcs(a, incident, outgoing) <= rcs(a.with_efficiency(1.0), incident, outgoing);
}

/// Passive reflectarray efficiency degraded by the insertion loss of the
/// reconfigurable cells.
struct EfficiencyLedger {
  double passive_aperture_eff = 0.5;
  double insertion_loss_db = 3.0;

  double resulting_eff() const noexcept {
    return passive_aperture_eff * std::pow(10.0, -insertion_loss_db / 10.0);
  }

  void validate() const {
    detail::require(passive_aperture_eff > 0.0 && passive_aperture_eff <= 1.0,
                    "EfficiencyLedger: passive efficiency must lie in (0, 1]");
    detail::require(insertion_loss_db >= 0.0, "EfficiencyLedger: insertion loss must be non-negative");
  }
};

}  // namespace thzris
