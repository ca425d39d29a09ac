#pragma once

// Bistatic link budget through a reflecting surface, receiver sensitivity
// from an M-QAM error-rate target, and the RCS needed to close the link.

#include <bit>
#include <cmath>
#include <string>

#include "thzris/core.hpp"

namespace thzris {

/// One base station -> surface -> terminal link.
struct LinkScenario {
  BistaticGeometry geometry;
  Frequency frequency{140e9};
  double tx_power_dbm = 0.0;
  double bs_gain_dbi = 0.0;
  double terminal_gain_dbi = 0.0;

  void validate() const {
    geometry.validate();
    detail::require(std::isfinite(tx_power_dbm), "LinkScenario: tx power must be finite");
    detail::require(std::isfinite(bs_gain_dbi) && std::isfinite(terminal_gain_dbi),
                    "LinkScenario: antenna gains must be finite");
  }
};

/// Square (or binary) QAM constellation of order M.
struct Modulation {
  int order = 4;

  std::string name() const { return std::to_string(order) + "-QAM"; }
  int bits_per_symbol() const noexcept { return std::countr_zero(static_cast<unsigned>(order)); }
};

struct ReceiverSpec {
  double bandwidth_hz = 2e9;
  double noise_figure_db = 7.0;
  Modulation modulation{4};
  double target_ber = 1e-6;
  double implementation_loss_db = 0.0;

  void validate() const {
    detail::require(std::isfinite(bandwidth_hz) && bandwidth_hz > 0.0,
                    "ReceiverSpec: bandwidth must be positive");
    detail::require(std::isfinite(noise_figure_db), "ReceiverSpec: noise figure must be finite");
    detail::require(target_ber > 0.0 && target_ber < 0.5,
                    "ReceiverSpec: target BER must lie in (0, 0.5)");
    detail::require(modulation.order >= 2 && std::has_single_bit(static_cast<unsigned>(modulation.order)),
                    "ReceiverSpec: modulation order must be a power of two");
  }
};

struct LinkReport {
  double rx_power_dbm = 0.0;
  double sensitivity_dbm = 0.0;
  double margin_db = 0.0;
  double spreading_term_db = 0.0;
  double rcs_dbsm = 0.0;

  bool closes() const noexcept { return margin_db >= 0.0; }
};

// ---------------------------------------------------------------------------

/// Gaussian tail probability Q(x).
inline double gaussian_q(double x) noexcept { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// Inverse of the Gaussian tail probability on (0, 0.5).
inline double inverse_gaussian_q(double p) {
  detail::require(p > 0.0 && p < 0.5, "inverse_gaussian_q: probability must lie in (0, 0.5)");
  double lo = 0.0;
  double hi = 40.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (gaussian_q(mid) > p) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// SNR (dB, per symbol over the Nyquist bandwidth) needed to reach
/// `target_ber` with Gray-coded M-QAM over AWGN.
///
/// M = 2 and M = 4 use the exact relation BER = Q(sqrt(2 Eb/N0)). Larger
/// square constellations use the nearest-neighbour approximation
/// BER = (4 / log2 M)(1 - 1/sqrt M) Q(sqrt(3 SNR / (M - 1))).
/// Non-square orders (8, 32, ...) are rejected.
inline double required_snr_db(Modulation modulation, double target_ber) {
  detail::require(target_ber > 0.0 && target_ber < 0.5, "required_snr_db: target BER must lie in (0, 0.5)");
  const int m = modulation.order;
  if (m < 2 || !std::has_single_bit(static_cast<unsigned>(m)))
    throw InvalidArgument("unsupported modulation order " + std::to_string(m));
  const int k = modulation.bits_per_symbol();
  if (m == 2 || m == 4) {
    const double x = inverse_gaussian_q(target_ber);
    const double ebn0 = 0.5 * x * x;
    return linear_to_db(ebn0) + linear_to_db(static_cast<double>(k));
  }
  if (k % 2 != 0) throw InvalidArgument("unsupported modulation order " + std::to_string(m) + " (non-square QAM)");
  const double sqrt_m = std::sqrt(static_cast<double>(m));
  const double prefactor = (4.0 / k) * (1.0 - 1.0 / sqrt_m);
  const double q_target = target_ber / prefactor;
  if (!(q_target < 0.5)) throw InvalidArgument("required_snr_db: target BER too high for " + modulation.name());
  const double x = inverse_gaussian_q(q_target);
  return linear_to_db(x * x * (m - 1) / 3.0);
}

/// Minimum received power for a given required SNR.
inline double sensitivity_from_snr(double bandwidth_hz, double noise_figure_db, double snr_db) {
  detail::require(bandwidth_hz > 0.0, "sensitivity: bandwidth must be positive");
  return thermal_noise_dbm_per_hz + linear_to_db(bandwidth_hz) + noise_figure_db + snr_db;
}

/// Terminal sensitivity in dBm.
inline double sensitivity(const ReceiverSpec& r) {
  r.validate();
  return sensitivity_from_snr(r.bandwidth_hz, r.noise_figure_db,
                              required_snr_db(r.modulation, r.target_ber)) +
         r.implementation_loss_db;
}

/// 10·log10((4π)^-3 · (λ / (d1·d2))²). Depends on d1·d2 only.
inline double spreading_term_db(const BistaticGeometry& g, Frequency f) {
  g.validate();
  const double ratio = f.wavelength() / (g.d1 * g.d2);
  return 20.0 * std::log10(ratio) - 30.0 * std::log10(4.0 * pi);
}

inline double received_power_dbm(const LinkScenario& s, double rcs_dbsm) {
  return s.tx_power_dbm + s.bs_gain_dbi + s.terminal_gain_dbi + rcs_dbsm +
         spreading_term_db(s.geometry, s.frequency);
}

/// RCS (dBsm) for which the received power equals `sensitivity_dbm`.
inline double required_rcs_dbsm(const LinkScenario& s, double sensitivity_dbm) {
  return sensitivity_dbm - s.tx_power_dbm - s.bs_gain_dbi - s.terminal_gain_dbi -
         spreading_term_db(s.geometry, s.frequency);
}

inline double required_rcs_dbsm(const LinkScenario& s, const ReceiverSpec& r) {
  return required_rcs_dbsm(s, sensitivity(r));
}

inline LinkReport evaluate_link(const LinkScenario& s, double rcs_dbsm, double sensitivity_dbm) {
  s.validate();
  LinkReport report;
  report.rcs_dbsm = rcs_dbsm;
  report.spreading_term_db = spreading_term_db(s.geometry, s.frequency);
  report.rx_power_dbm = received_power_dbm(s, rcs_dbsm);
  report.sensitivity_dbm = sensitivity_dbm;
  report.margin_db = report.rx_power_dbm - sensitivity_dbm;
  return report;
}

}  // namespace thzris
