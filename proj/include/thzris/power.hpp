#pragma once

// Control-power estimate of a reconfigurable panel.

#include <cstdint>
#include <map>
#include <string>

#include "thzris/core.hpp"

namespace thzris {

struct TechnologyProfile {
  std::string name;
  double per_cell_power_w = 0.0;
  int switches_per_cell = 2;
  std::string notes;

  void validate() const {
    detail::require(!name.empty(), "TechnologyProfile: name must not be empty");
    detail::require(std::isfinite(per_cell_power_w) && per_cell_power_w >= 0.0,
                    "TechnologyProfile: per-cell power must be >= 0");
    detail::require(switches_per_cell >= 1, "TechnologyProfile: need at least one switch per cell");
  }
};

inline double panel_power(std::int64_t n_cells, const TechnologyProfile& tech) {
  detail::require(n_cells >= 1, "panel_power: need at least one cell");
  tech.validate();
  return static_cast<double>(n_cells) * tech.per_cell_power_w;
}

// Order-of-magnitude placeholders: CMOS switches draw tens of µW per cell,
// PIN diodes several mW.
inline TechnologyProfile cmos_rfsoi_profile() {
  return {"cmos_rfsoi", 20e-6, 2, "CMOS RF-SOI switches, bias logic integrated in each cell"};
}

inline TechnologyProfile pin_diode_profile() {
  return {"pin_diode", 3e-3, 2, "PIN diodes, forward-biased in the on state"};
}

inline std::map<std::string, TechnologyProfile> bundled_technology_profiles() {
  std::map<std::string, TechnologyProfile> out;
  for (auto p : {cmos_rfsoi_profile(), pin_diode_profile()}) out.emplace(p.name, p);
  return out;
}

}  // namespace thzris
