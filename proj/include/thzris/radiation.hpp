#pragma once

// Far-field engine for a programmed surface under plane-wave illumination.
//
// Field model, for a profile with coefficients c_n at positions r_n,
// illuminated from direction û_in and observed towards û at frequency f:
//
//   E(û) = EF(θ) · Σ_n c_n · exp(j k(f) (û - û_in) · r_n),  EF(θ) = sqrt(cos θ)
//
// Incident directions follow the reflection convention: a plane wave from
// û_in is reflected specularly towards û = û_in. The programmed phases are
// part of c_n and stay frozen at the design frequency.
//
// Two routes evaluate the same field: a direct summation (the oracle) and a
// zero-padded 2-D DFT on the direction-cosine lattice. The hemisphere power
// integral ∬|E|² dΩ can likewise be computed by (θ, φ) trapezoid quadrature
// or, because cos θ dΩ = du dv, as a lattice sum over the unit disk.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thzris/aperture.hpp"
#include "thzris/core.hpp"
#include "thzris/detail/fft.hpp"
#include "thzris/detail/parallel.hpp"
#include "thzris/surface.hpp"

namespace thzris {

/// The requested angular grid cannot resolve the main lobe.
class UnderResolvedError : public InvalidArgument {
public:
  UnderResolvedError(const std::string& message, double suggested_resolution)
      : InvalidArgument(message), suggested_resolution_(suggested_resolution) {}
  /// Suggested grid step, radians.
  double suggested_resolution() const noexcept { return suggested_resolution_; }

private:
  double suggested_resolution_;
};

/// A squint sweep whose frequency span does not reach the -3 dB points.
class BandEdgeError : public Error {
public:
  using Error::Error;
};

inline constexpr double min_directivity_dbi = -300.0;

/// Per-element field factor sqrt(cos θ); zero at and beyond grazing.
inline double element_factor(double theta) noexcept {
  const double c = std::cos(theta);
  return c > 0.0 ? std::sqrt(c) : 0.0;
}

inline double power_to_dbi(double directivity) noexcept {
  return directivity > 0.0 ? std::max(min_directivity_dbi, 10.0 * std::log10(directivity)) : min_directivity_dbi;
}

namespace detail {

/// Coefficients including the incident plane-wave phase at frequency f.
inline std::vector<Complex> illuminated_coefficients(const PhaseProfile& p, Frequency f) {
  const double k = f.wavenumber();
  const auto in = p.illumination_direction().uv();
  const auto coeffs = p.coefficients();
  const auto pos = p.positions();
  std::vector<Complex> out(p.size());
  for (std::size_t n = 0; n < p.size(); ++n)
    out[n] = coeffs[n] * std::polar(1.0, -k * (in[0] * pos[n].x + in[1] * pos[n].y));
  return out;
}

inline Direction direction_from_uv(double u, double v) {
  const double s = std::min(1.0, std::hypot(u, v));
  return Direction(std::asin(s), std::atan2(v, u));
}

}  // namespace detail

/// Exact per-element summation of the far field. Serves as the reference
/// for every faster path.
inline std::vector<Complex> array_factor_direct(const PhaseProfile& p, Frequency f,
                                                std::span<const Direction> directions) {
  const double k = f.wavenumber();
  const auto coeffs = detail::illuminated_coefficients(p, f);
  const auto pos = p.positions();
  std::vector<Complex> out;
  out.reserve(directions.size());
  for (const auto& d : directions) {
    const auto uv = d.uv();
    Complex sum{0.0, 0.0};
    for (std::size_t n = 0; n < coeffs.size(); ++n)
      sum += coeffs[n] * std::polar(1.0, k * (uv[0] * pos[n].x + uv[1] * pos[n].y));
    out.push_back(sum * element_factor(d.theta()));
  }
  return out;
}

/// Fast evaluation of the far field at arbitrary directions. Uniform lattices
/// use a separable Horner scheme (one complex multiply-add per element);
/// other layouts fall back to direct summation. Output order and values do
/// not depend on the thread count.
class FarFieldEvaluator {
public:
  FarFieldEvaluator(const PhaseProfile& p, Frequency f)
      : profile_(p), frequency_(f), coeffs_(detail::illuminated_coefficients(p, f)), lattice_(p.on_uniform_lattice()) {}

  Complex field(const Direction& d) const {
    if (!lattice_) {
      const Direction one[] = {d};
      return array_factor_direct(profile_, frequency_, one).front();
    }
    const auto& lay = profile_.layout();
    const double k = frequency_.wavenumber();
    const auto uv = d.uv();
    const Complex wu = std::polar(1.0, k * lay.pitch_x * uv[0]);
    const Complex wv = std::polar(1.0, k * lay.pitch_y * uv[1]);
    // Real arithmetic: std::complex multiplication carries NaN/Inf recovery
    // branches that dominate this loop.
    const double ur = wu.real(), ui = wu.imag();
    const double vr = wv.real(), vi = wv.imag();
    // Row sums are independent Horner chains; run four at once.
    constexpr int block = 4;
    const int cols = lay.cols;
    std::vector<double> row_re(static_cast<std::size_t>(lay.rows)), row_im(static_cast<std::size_t>(lay.rows));
    const auto* base = reinterpret_cast<const double*>(coeffs_.data());
    int r = 0;
    for (; r + block <= lay.rows; r += block) {
      double sr[block] = {}, si[block] = {};
      for (int c = cols - 1; c >= 0; --c) {
        for (int b = 0; b < block; ++b) {
          const double* cell = base + 2 * (static_cast<std::size_t>(r + b) * cols + c);
          const double nr = sr[b] * ur - si[b] * ui + cell[0];
          const double ni = sr[b] * ui + si[b] * ur + cell[1];
          sr[b] = nr;
          si[b] = ni;
        }
      }
      for (int b = 0; b < block; ++b) {
        row_re[r + b] = sr[b];
        row_im[r + b] = si[b];
      }
    }
    for (; r < lay.rows; ++r) {
      double sr = 0.0, si = 0.0;
      for (int c = cols - 1; c >= 0; --c) {
        const double* cell = base + 2 * (static_cast<std::size_t>(r) * cols + c);
        const double nr = sr * ur - si * ui + cell[0];
        const double ni = sr * ui + si * ur + cell[1];
        sr = nr;
        si = ni;
      }
      row_re[r] = sr;
      row_im[r] = si;
    }
    double tr = 0.0, ti = 0.0;
    for (int q = lay.rows - 1; q >= 0; --q) {
      const double nr = tr * vr - ti * vi + row_re[q];
      const double ni = tr * vi + ti * vr + row_im[q];
      tr = nr;
      ti = ni;
    }
    const Complex total{tr, ti};
    const double x0 = -0.5 * (lay.cols - 1) * lay.pitch_x;
    const double y0 = -0.5 * (lay.rows - 1) * lay.pitch_y;
    return total * std::polar(element_factor(d.theta()), k * (x0 * uv[0] + y0 * uv[1]));
  }

  std::vector<Complex> field(std::span<const Direction> directions, int threads = 0) const {
    std::vector<Complex> out(directions.size());
    detail::parallel_for(directions.size(), threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) out[i] = field(directions[i]);
    });
    return out;
  }

private:
  const PhaseProfile& profile_;
  Frequency frequency_;
  std::vector<Complex> coeffs_;
  bool lattice_;
};

// ---------------------------------------------------------------------------
// Patterns

/// Sampled far field. Angular grids hold (θ, φ) in radians; direction-cosine
/// grids hold (u, v). Samples are stored axis0-major.
struct RadiationPattern {
  enum class Grid { Angular, DirectionCosine };

  Grid grid = Grid::Angular;
  double frequency_hz = 0.0;
  std::vector<double> axis0;  // θ or v
  std::vector<double> axis1;  // φ or u
  std::vector<Complex> field;
  /// Raw array factor (no element factor); direction-cosine grids only.
  std::vector<Complex> array_factor;
  /// Directivity per sample in dBi; empty unless normalised.
  std::vector<double> directivity_dbi;
  /// ∬|E|² dΩ over the front hemisphere; zero when not computed.
  double radiated_power = 0.0;
  double peak_directivity_dbi = min_directivity_dbi;
  Direction peak_direction;

  std::size_t index(std::size_t i0, std::size_t i1) const noexcept { return i0 * axis1.size() + i1; }
  bool visible(std::size_t i0, std::size_t i1) const noexcept {
    return grid == Grid::Angular || axis0[i0] * axis0[i0] + axis1[i1] * axis1[i1] <= 1.0;
  }
};

/// Array factor on the direction-cosine lattice via a zero-padded 2-D DFT of
/// the coefficient grid (uv_oversample · grid size points per axis). Lattice
/// spacing is Δu = λ(f) / (pitch_x · M_x). One period of the lattice is
/// returned, centred on u = v = 0; the element factor is applied afterwards
/// inside the visible disk.
inline RadiationPattern array_factor_fft(const PhaseProfile& p, Frequency f, int uv_oversample = 4) {
  detail::require(uv_oversample >= 1, "array_factor_fft: oversample must be >= 1");
  if (!p.on_uniform_lattice()) throw InvalidArgument("FFT path requires uniform lattice");
  const auto& lay = p.layout();
  const int mx = uv_oversample * lay.cols;
  const int my = uv_oversample * lay.rows;
  std::vector<Complex> padded(static_cast<std::size_t>(mx) * my, Complex{0.0, 0.0});
  const auto coeffs = detail::illuminated_coefficients(p, f);
  for (int r = 0; r < lay.rows; ++r)
    for (int c = 0; c < lay.cols; ++c)
      padded[static_cast<std::size_t>(r) * mx + c] = coeffs[p.index(r, c)];
  const auto spectrum = detail::dft2_positive(padded, my, mx);

  const double lambda = f.wavelength();
  const double du = lambda / (lay.pitch_x * mx);
  const double dv = lambda / (lay.pitch_y * my);
  RadiationPattern out;
  out.grid = RadiationPattern::Grid::DirectionCosine;
  out.frequency_hz = f.hertz();
  const int qx0 = -(mx / 2);
  const int qy0 = -(my / 2);
  for (int q = 0; q < my; ++q) out.axis0.push_back((qy0 + q) * dv);
  for (int q = 0; q < mx; ++q) out.axis1.push_back((qx0 + q) * du);
  out.field.resize(spectrum.size());
  out.array_factor.resize(spectrum.size());
  for (int iy = 0; iy < my; ++iy) {
    const int qy = qy0 + iy;
    const int by = ((qy % my) + my) % my;
    const double phase_y = -two_pi * qy * 0.5 * (lay.rows - 1) / my;
    for (int ix = 0; ix < mx; ++ix) {
      const int qx = qx0 + ix;
      const int bx = ((qx % mx) + mx) % mx;
      const double phase_x = -two_pi * qx * 0.5 * (lay.cols - 1) / mx;
      const Complex af = spectrum[static_cast<std::size_t>(by) * mx + bx] * std::polar(1.0, phase_x + phase_y);
      const std::size_t i = out.index(static_cast<std::size_t>(iy), static_cast<std::size_t>(ix));
      out.array_factor[i] = af;
      const double u = out.axis1[ix];
      const double v = out.axis0[iy];
      const double s2 = u * u + v * v;
      out.field[i] = s2 <= 1.0 ? af * std::pow(1.0 - s2, 0.25) : Complex{0.0, 0.0};
    }
  }
  return out;
}

/// ∬|E|² dΩ over the front hemisphere as a lattice sum of |AF|² over the
/// visible unit disk in (u, v) (the √cos θ element factor cancels the
/// Jacobian). The lattice is extended periodically when one period does not
/// cover the disk.
inline double radiated_power_uv(const PhaseProfile& p, Frequency f, int uv_oversample = 8) {
  if (!p.on_uniform_lattice()) throw InvalidArgument("FFT path requires uniform lattice");
  const auto& lay = p.layout();
  // The disk edge cuts the lattice cells, so small panels need a finer
  // lattice than the oversample factor alone would give.
  constexpr int min_points = 512;
  const int mx = std::max(uv_oversample * lay.cols, min_points);
  const int my = std::max(uv_oversample * lay.rows, min_points);
  std::vector<Complex> padded(static_cast<std::size_t>(mx) * my, Complex{0.0, 0.0});
  const auto coeffs = detail::illuminated_coefficients(p, f);
  for (int r = 0; r < lay.rows; ++r)
    for (int c = 0; c < lay.cols; ++c)
      padded[static_cast<std::size_t>(r) * mx + c] = coeffs[p.index(r, c)];
  const auto spectrum = detail::dft2_positive(padded, my, mx);
  const double lambda = f.wavelength();
  const double du = lambda / (lay.pitch_x * mx);
  const double dv = lambda / (lay.pitch_y * my);
  const int qx_max = static_cast<int>(std::floor(1.0 / du));
  const int qy_max = static_cast<int>(std::floor(1.0 / dv));
  double sum = 0.0;
  for (int qy = -qy_max; qy <= qy_max; ++qy) {
    const double v = qy * dv;
    const int by = ((qy % my) + my) % my;
    for (int qx = -qx_max; qx <= qx_max; ++qx) {
      const double u = qx * du;
      if (u * u + v * v > 1.0) continue;
      const int bx = ((qx % mx) + mx) % mx;
      sum += std::norm(spectrum[static_cast<std::size_t>(by) * mx + bx]);
    }
  }
  return sum * du * dv;
}

/// Half-power beamwidth (radians) of a uniformly illuminated aperture of the
/// profile's larger extent at broadside: 0.886 λ / L.
inline double analytical_beamwidth(const PhaseProfile& p, Frequency f) {
  const auto& lay = p.layout();
  const double extent = std::max(lay.cols * lay.pitch_x, lay.rows * lay.pitch_y);
  return std::min(pi / 2.0, 0.886 * f.wavelength() / extent);
}

/// Location of the strongest visible lattice sample of |E|².
inline Direction find_peak_direction(const PhaseProfile& p, Frequency f, int uv_oversample = 4) {
  if (!p.on_uniform_lattice() || p.size() == 1) return p.steering_target();
  const auto lattice = array_factor_fft(p, f, uv_oversample);
  double best = -1.0;
  std::size_t best_i0 = 0;
  std::size_t best_i1 = 0;
  for (std::size_t i0 = 0; i0 < lattice.axis0.size(); ++i0)
    for (std::size_t i1 = 0; i1 < lattice.axis1.size(); ++i1) {
      const double power = std::norm(lattice.field[lattice.index(i0, i1)]);
      if (power > best) {
        best = power;
        best_i0 = i0;
        best_i1 = i1;
      }
    }
  return detail::direction_from_uv(lattice.axis1[best_i1], lattice.axis0[best_i0]);
}

struct DirectivityOptions {
  /// Grid step inside the main-lobe window.
  double lobe_resolution = deg_to_rad(0.05);
  /// Grid step elsewhere; defaults to min(0.5°, the sampling step that
  /// resolves the sidelobe structure).
  std::optional<double> background_resolution;
  /// Half-width of the refined window, in (scan-broadened) beamwidths.
  double lobe_window_beamwidths = 3.0;
  int threads = 0;
};

namespace detail {

inline std::vector<double> trapezoid_weights(const std::vector<double>& nodes) {
  std::vector<double> w(nodes.size(), 0.0);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double h = nodes[i + 1] - nodes[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

inline std::vector<double> periodic_trapezoid_weights(const std::vector<double>& nodes) {
  const std::size_t n = nodes.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double next = (i + 1 < n) ? nodes[i + 1] : nodes[0] + two_pi;
    const double h = next - nodes[i];
    w[i] += 0.5 * h;
    w[(i + 1) % n] += 0.5 * h;
  }
  return w;
}

inline void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }), v.end());
}

inline std::vector<double> refined_nodes(double lo, double hi, double coarse, double window_lo, double window_hi,
                                         double fine) {
  std::vector<double> nodes;
  const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / coarse - 1e-9)));
  for (int i = 0; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    if (x <= window_lo || x >= window_hi) nodes.push_back(x);
  }
  if (window_hi > window_lo) {
    const int m = std::max(1, static_cast<int>(std::ceil((window_hi - window_lo) / fine - 1e-9)));
    for (int j = 0; j <= m; ++j) nodes.push_back(window_lo + (window_hi - window_lo) * j / m);
  }
  sort_unique(nodes);
  return nodes;
}

}  // namespace detail

/// Directivity D(û) = 4π|E(û)|² / ∬|E|² dΩ on a (θ, φ) grid covering the
/// front hemisphere. The power integral uses the trapezoid rule with the
/// sin θ Jacobian; the grid is refined around the main lobe, located from a
/// coarse lattice evaluation.
inline RadiationPattern directivity(const PhaseProfile& p, Frequency f, const DirectivityOptions& options = {}) {
  const double beamwidth = analytical_beamwidth(p, f);
  if (!(options.lobe_resolution > 0.0) || options.lobe_resolution > 0.5 * beamwidth) {
    const double suggestion = beamwidth / 10.0;
    throw UnderResolvedError("under-resolved grid: resolution " + std::to_string(rad_to_deg(options.lobe_resolution)) +
                                 " deg exceeds half the 3 dB beamwidth; use <= " +
                                 std::to_string(rad_to_deg(suggestion)) + " deg",
                             suggestion);
  }
  const auto& lay = p.layout();
  const double extent = std::max(lay.cols * lay.pitch_x, lay.rows * lay.pitch_y);
  const double nyquist = 0.95 * f.wavelength() / (2.0 * extent);
  const double background = options.background_resolution.value_or(std::min(deg_to_rad(0.5), nyquist));
  const double fine = std::min(options.lobe_resolution, background);

  const Direction peak = find_peak_direction(p, f);
  const double cos_peak = std::max(std::cos(peak.theta()), 0.05);
  const double window = std::min(pi / 4.0, options.lobe_window_beamwidths * beamwidth / cos_peak);

  const auto thetas = detail::refined_nodes(0.0, pi / 2.0, background, std::max(0.0, peak.theta() - window),
                                            std::min(pi / 2.0, peak.theta() + window), fine);
  std::vector<double> phis;
  {
    const int n = std::max(4, static_cast<int>(std::ceil(two_pi / background - 1e-9)));
    for (int j = 0; j < n; ++j) phis.push_back(two_pi * j / n);
    const double sin_peak = std::sin(peak.theta());
    if (peak.theta() > window && sin_peak > 0.0) {
      const double phi_window = window / sin_peak;
      const double phi_step = fine / sin_peak;
      if (phi_window < pi) {
        std::erase_if(phis, [&](double phi) { return std::abs(phase_distance(phi, peak.phi())) < phi_window; });
        const int m = std::max(1, static_cast<int>(std::ceil(2.0 * phi_window / phi_step - 1e-9)));
        for (int j = 0; j <= m; ++j) phis.push_back(wrap_two_pi(peak.phi() - phi_window + 2.0 * phi_window * j / m));
      }
    }
    detail::sort_unique(phis);
    if (phis.size() > 1 && phis.back() - phis.front() > two_pi - 1e-12) phis.pop_back();
  }

  std::vector<Direction> directions;
  directions.reserve(thetas.size() * phis.size());
  for (double t : thetas)
    for (double ph : phis) directions.emplace_back(t, ph);

  RadiationPattern out;
  out.grid = RadiationPattern::Grid::Angular;
  out.frequency_hz = f.hertz();
  out.axis0 = thetas;
  out.axis1 = phis;
  out.field = FarFieldEvaluator(p, f).field(directions, options.threads);

  const auto wt = detail::trapezoid_weights(thetas);
  const auto wp = detail::periodic_trapezoid_weights(phis);
  double power = 0.0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    double ring = 0.0;
    for (std::size_t j = 0; j < phis.size(); ++j) ring += std::norm(out.field[out.index(i, j)]) * wp[j];
    power += ring * std::sin(thetas[i]) * wt[i];
  }
  out.radiated_power = power;
  out.directivity_dbi.resize(out.field.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < out.field.size(); ++i) {
    out.directivity_dbi[i] = power_to_dbi(4.0 * pi * std::norm(out.field[i]) / power);
    if (out.directivity_dbi[i] > out.directivity_dbi[best]) best = i;
  }
  out.peak_directivity_dbi = out.directivity_dbi[best];
  out.peak_direction = directions[best];
  return out;
}

inline RadiationPattern directivity(const PhaseProfile& p, Frequency f, double grid_resolution) {
  DirectivityOptions options;
  options.lobe_resolution = grid_resolution;
  return directivity(p, f, options);
}

/// Directivity along a principal-plane cut. Elevations are signed: negative
/// values lie in the half-plane at azimuth plane_phi + π.
struct PatternCut {
  double plane_phi = 0.0;
  std::vector<double> elevation;  // rad
  std::vector<double> directivity_dbi;
};

inline PatternCut principal_cut(const PhaseProfile& p, Frequency f, double plane_phi, double radiated_power,
                                double step = deg_to_rad(0.05), int threads = 0) {
  detail::require(radiated_power > 0.0, "principal_cut: radiated power must be positive");
  detail::require(step > 0.0, "principal_cut: step must be positive");
  PatternCut cut;
  cut.plane_phi = plane_phi;
  const int n = static_cast<int>(std::ceil(pi / 2.0 / step - 1e-9));
  std::vector<Direction> directions;
  for (int i = -n; i <= n; ++i) {
    const double elevation = pi / 2.0 * i / n;
    cut.elevation.push_back(elevation);
    directions.push_back(Direction::signed_elevation(elevation, plane_phi));
  }
  const auto field = FarFieldEvaluator(p, f).field(directions, threads);
  for (const auto& e : field) cut.directivity_dbi.push_back(power_to_dbi(4.0 * pi * std::norm(e) / radiated_power));
  return cut;
}

// ---------------------------------------------------------------------------
// Quantization loss

/// Classical loss of the main beam under uniform b-bit phase quantization,
/// -20 log10(sinc(π / 2^b)), in dB.
inline double analytical_quantization_loss_db(int bits) {
  detail::require(bits >= 1, "analytical_quantization_loss_db: bits must be >= 1");
  const double x = pi / static_cast<double>(1 << bits);
  return -20.0 * std::log10(std::sin(x) / x);
}

struct QuantizationLossEntry {
  int bits = 0;
  double peak_directivity_dbi = 0.0;
  double loss_db = 0.0;
  double analytical_loss_db = 0.0;
};

struct QuantizationLossReport {
  double continuous_peak_dbi = 0.0;
  std::vector<QuantizationLossEntry> entries;
};

inline QuantizationLossReport quantization_loss(const ApertureSpec& a, const Direction& outgoing,
                                                std::span<const int> bits_list, const TaperSpec& taper,
                                                const Direction& incident = Direction::broadside(),
                                                const DirectivityOptions& options = {},
                                                LevelOffset offset = LevelOffset::None) {
  const auto continuous = synthesize_profile(a, incident, outgoing, taper);
  const Frequency f0 = a.design_frequency();
  QuantizationLossReport report;
  report.continuous_peak_dbi = directivity(continuous, f0, options).peak_directivity_dbi;
  for (int bits : bits_list) {
    QuantizationLossEntry entry;
    entry.bits = bits;
    entry.peak_directivity_dbi = directivity(quantize_profile(continuous, bits, offset), f0, options).peak_directivity_dbi;
    entry.loss_db = report.continuous_peak_dbi - entry.peak_directivity_dbi;
    entry.analytical_loss_db = analytical_quantization_loss_db(bits);
    report.entries.push_back(entry);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Beam squint

enum class PowerNormalization {
  UvLattice,          // FFT lattice sum over the visible disk
  AngularQuadrature,  // (θ, φ) trapezoid quadrature, direct evaluation
};

struct SquintOptions {
  std::optional<int> bits;  // nullopt: continuous phases
  LevelOffset level_offset = LevelOffset::None;
  double f_span_hz = 20e9;
  int n_samples = 81;
  PowerNormalization normalization = PowerNormalization::UvLattice;
  /// Optional dispersive unit-cell model applied at every frequency sample.
  std::optional<UnitCellTable> cell_model;
  int threads = 0;
};

struct SquintReport {
  double design_freq_hz = 0.0;
  Direction target;
  std::vector<double> freq_samples_hz;
  std::vector<double> gain_at_target_db;
  double bw_3db_hz = 0.0;
  double lower_edge_hz = 0.0;
  double upper_edge_hz = 0.0;
  /// Gain stayed flat across the whole span; bandwidth saturates at the span.
  bool saturated = false;

  double fractional_bw_percent() const noexcept { return 100.0 * bw_3db_hz / design_freq_hz; }
  double gain_at_design_db() const { return gain_at_target_db.at(gain_at_target_db.size() / 2); }
};

/// Gain towards the design direction across frequency with the programmed
/// phases frozen at f0. Gain is referred to the power radiated at f0 (a
/// lossless surface reflects the same intercepted power at every frequency),
/// so it equals the directivity at f0 and tracks |E(target, f)|² elsewhere.
/// BW_3dB is the contiguous interval around f0 with gain >= gain(f0) - 3 dB,
/// with linear interpolation of the crossings.
inline SquintReport squint_sweep(const ApertureSpec& a, const Direction& incident, const Direction& outgoing,
                                 const TaperSpec& taper, const SquintOptions& options = {}) {
  const Frequency f0 = a.design_frequency();
  detail::require(options.n_samples >= 11 && options.n_samples % 2 == 1,
                  "squint_sweep: n_samples must be odd and >= 11");
  detail::require(options.f_span_hz > 0.0 && options.f_span_hz < f0.hertz(),
                  "squint_sweep: f_span must lie in (0, f0)");

  PhaseProfile profile = synthesize_profile(a, incident, outgoing, taper);
  if (options.bits) profile = quantize_profile(profile, *options.bits, options.level_offset);
  const auto at_frequency = [&](Frequency f) {
    return options.cell_model ? apply_cell_model(profile, *options.cell_model, f) : profile;
  };

  const PhaseProfile design_profile = at_frequency(f0);
  double power_f0 = 0.0;
  if (options.normalization == PowerNormalization::UvLattice) {
    power_f0 = radiated_power_uv(design_profile, f0);
  } else {
    DirectivityOptions d;
    d.threads = options.threads;
    power_f0 = directivity(design_profile, f0, d).radiated_power;
  }

  SquintReport report;
  report.design_freq_hz = f0.hertz();
  report.target = outgoing;
  const int n = options.n_samples;
  const int centre = n / 2;
  report.freq_samples_hz.resize(n);
  report.gain_at_target_db.resize(n);
  detail::parallel_for(static_cast<std::size_t>(n), options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double hz = f0.hertz() + options.f_span_hz * (static_cast<double>(i) - centre) / (n - 1);
      const Frequency f(hz);
      const PhaseProfile pf = at_frequency(f);
      const Direction one[] = {outgoing};
      const Complex e = array_factor_direct(pf, f, one).front();
      report.freq_samples_hz[i] = hz;
      report.gain_at_target_db[i] = power_to_dbi(4.0 * pi * std::norm(e) / power_f0);
    }
  });

  const auto& g = report.gain_at_target_db;
  const auto& fs = report.freq_samples_hz;
  const double g0 = g[centre];
  const double threshold = g0 - 3.0;
  const double flat_tolerance = 0.01;
  if (std::abs(g.front() - g0) <= flat_tolerance && std::abs(g.back() - g0) <= flat_tolerance) {
    bool flat = true;
    for (double v : g) flat = flat && std::abs(v - g0) <= flat_tolerance;
    if (flat) {
      report.saturated = true;
      report.lower_edge_hz = fs.front();
      report.upper_edge_hz = fs.back();
      report.bw_3db_hz = options.f_span_hz;
      return report;
    }
  }
  const auto crossing = [&](int inside, int outside) {
    const double t = (g[inside] - threshold) / (g[inside] - g[outside]);
    return fs[inside] + t * (fs[outside] - fs[inside]);
  };
  int hi = centre;
  while (hi + 1 < n && g[hi + 1] >= threshold) ++hi;
  int lo = centre;
  while (lo - 1 >= 0 && g[lo - 1] >= threshold) --lo;
  if (hi == n - 1 || lo == 0) throw BandEdgeError("band edges inside the -3 dB region: increase f_span");
  report.upper_edge_hz = crossing(hi, hi + 1);
  report.lower_edge_hz = crossing(lo, lo - 1);
  report.bw_3db_hz = report.upper_edge_hz - report.lower_edge_hz;
  return report;
}

// ---------------------------------------------------------------------------
// Codebook coverage

struct CodebookCoverage {
  /// Gain of beam i towards its own target, relative to the coherent sum
  /// Σ|c_n| at broadside, dB.
  std::vector<double> gain_at_target_db;
  /// Best gain over the codebook at the midpoint between adjacent targets.
  std::vector<double> crossover_gain_db;
  double peak_gain_db = 0.0;
  /// peak_gain_db - min(crossover_gain_db).
  double crossover_loss_db = 0.0;
};

inline CodebookCoverage codebook_coverage(std::span<const PhaseProfile> book, std::span<const Direction> grid,
                                          Frequency f) {
  detail::require(!book.empty() && book.size() == grid.size(), "codebook_coverage: one profile per grid direction");
  double reference = 0.0;
  for (double a : book.front().illumination()) reference += a;
  const auto relative_db = [&](Complex e) { return power_to_dbi(std::norm(e) / (reference * reference)); };

  CodebookCoverage out;
  for (std::size_t i = 0; i < book.size(); ++i) {
    const Direction one[] = {grid[i]};
    out.gain_at_target_db.push_back(relative_db(array_factor_direct(book[i], f, one).front()));
  }
  out.peak_gain_db = *std::max_element(out.gain_at_target_db.begin(), out.gain_at_target_db.end());
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const auto a = grid[i].unit_vector();
    const auto b = grid[i + 1].unit_vector();
    const Vec3 m{a[0] + b[0], a[1] + b[1], a[2] + b[2]};
    const double norm = std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
    const Direction mid(std::acos(std::clamp(m[2] / norm, -1.0, 1.0)), std::atan2(m[1], m[0]));
    double best = min_directivity_dbi;
    for (const auto& beam : book) {
      const Direction one[] = {mid};
      best = std::max(best, relative_db(array_factor_direct(beam, f, one).front()));
    }
    out.crossover_gain_db.push_back(best);
  }
  if (!out.crossover_gain_db.empty())
    out.crossover_loss_db =
        out.peak_gain_db - *std::min_element(out.crossover_gain_db.begin(), out.crossover_gain_db.end());
  return out;
}

}  // namespace thzris
