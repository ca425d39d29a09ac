#pragma once

// Units, constants and angular primitives shared by the planner modules.
// Angles are radians everywhere in the library; degrees only appear at the
// CLI boundary.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace thzris {

inline constexpr double speed_of_light = 299'792'458.0;  // m/s, exact
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Thermal noise density at 290 K.
inline constexpr double thermal_noise_dbm_per_hz = -174.0;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A value violated a type invariant or an operation precondition.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// The requested geometry or link cannot be realised physically
/// (grazing angles, band-edge violations and similar).
class InfeasibleError : public Error {
public:
  using Error::Error;
};

namespace detail {
inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}
}  // namespace detail

inline constexpr double deg_to_rad(double deg) noexcept { return deg * pi / 180.0; }
inline constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / pi; }

/// Wraps an angle into [0, 2π).
inline double wrap_two_pi(double phase) noexcept {
  double w = std::fmod(phase, two_pi);
  if (w < 0.0) w += two_pi;
  if (w >= two_pi) w -= two_pi;
  return w;
}

/// Shortest signed distance between two phases, in (-π, π].
inline double phase_distance(double a, double b) noexcept {
  double d = wrap_two_pi(a - b);
  return d > pi ? d - two_pi : d;
}

// ---------------------------------------------------------------------------
// dB arithmetic

inline double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double linear) {
  detail::require(linear > 0.0, "linear_to_db: value must be positive");
  return 10.0 * std::log10(linear);
}

/// Field (amplitude) ratio for a power ratio in dB.
inline double db_to_amplitude(double db) noexcept { return std::pow(10.0, db / 20.0); }

inline double dbm_to_watts(double dbm) noexcept { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watts_to_dbm(double watts) {
  detail::require(watts > 0.0, "watts_to_dbm: power must be positive");
  return 10.0 * std::log10(watts) + 30.0;
}

// ---------------------------------------------------------------------------
// Frequency

class Frequency {
public:
  explicit Frequency(double hertz) : hertz_(hertz) {
    detail::require(std::isfinite(hertz) && hertz > 0.0, "Frequency must be positive and finite");
  }

  static Frequency ghz(double value) { return Frequency(value * 1e9); }

  double hertz() const noexcept { return hertz_; }
  double wavelength() const noexcept { return speed_of_light / hertz_; }
  double wavenumber() const noexcept { return two_pi * hertz_ / speed_of_light; }

  friend bool operator==(const Frequency&, const Frequency&) = default;
  friend auto operator<=>(const Frequency&, const Frequency&) = default;

private:
  double hertz_;
};

inline double wavelength(Frequency f) noexcept { return f.wavelength(); }

/// Fraunhofer (far-field) distance 2·D²/λ of an aperture of extent D.
inline double fraunhofer_distance(double aperture_extent, Frequency f) {
  detail::require(aperture_extent > 0.0, "fraunhofer_distance: aperture size must be positive");
  return 2.0 * aperture_extent * aperture_extent / f.wavelength();
}

// ---------------------------------------------------------------------------
// Directions

using Vec3 = std::array<double, 3>;

/// Direction in the half-space in front of the surface. The surface lies in
/// the xy-plane with its normal along +z; theta is measured from the normal.
class Direction {
public:
  Direction() = default;

  Direction(double theta, double phi) : theta_(theta), phi_(wrap_two_pi(phi)) {
    detail::require(std::isfinite(theta) && std::isfinite(phi), "Direction angles must be finite");
    detail::require(theta >= 0.0 && theta <= pi / 2.0 + 1e-12,
                    "Direction theta must lie in [0, pi/2]");
    if (theta_ > pi / 2.0) theta_ = pi / 2.0;
  }

  static Direction degrees(double theta_deg, double phi_deg = 0.0) {
    return signed_elevation(deg_to_rad(theta_deg), deg_to_rad(phi_deg));
  }

  /// Builds a direction from an elevation that may be negative within a cut
  /// plane; negative values map to the opposite azimuth.
  static Direction signed_elevation(double theta, double plane_phi) {
    if (theta < 0.0) return Direction(-theta, plane_phi + pi);
    return Direction(theta, plane_phi);
  }

  static constexpr Direction broadside() noexcept { return {}; }

  double theta() const noexcept { return theta_; }
  double phi() const noexcept { return phi_; }

  Vec3 unit_vector() const noexcept {
    const double s = std::sin(theta_);
    return {s * std::cos(phi_), s * std::sin(phi_), std::cos(theta_)};
  }

  /// Direction cosines (u, v) projected on the surface plane.
  std::array<double, 2> uv() const noexcept {
    const double s = std::sin(theta_);
    return {s * std::cos(phi_), s * std::sin(phi_)};
  }

  friend bool operator==(const Direction&, const Direction&) = default;

private:
  double theta_ = 0.0;
  double phi_ = 0.0;
};

/// Bistatic placement of the surface between a base station and a terminal.
struct BistaticGeometry {
  double d1 = 0.0;  // base station to surface, m
  double d2 = 0.0;  // surface to terminal, m
  Direction incident;
  Direction outgoing;

  void validate() const {
    detail::require(std::isfinite(d1) && d1 > 0.0, "BistaticGeometry: d1 must be positive");
    detail::require(std::isfinite(d2) && d2 > 0.0, "BistaticGeometry: d2 must be positive");
  }
};

}  // namespace thzris
