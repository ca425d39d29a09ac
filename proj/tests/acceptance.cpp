// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "thzris/aperture.hpp"
#include "thzris/cli/commands.hpp"
#include "thzris/link_budget.hpp"
#include "thzris/radiation.hpp"

using namespace thzris;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

const Frequency f140 = Frequency::ghz(140);

LinkScenario reference_link() {
  LinkScenario s;
  s.geometry = {50.0, 50.0, Direction::broadside(), Direction::degrees(45.0)};
  s.frequency = f140;
  s.tx_power_dbm = 20.0;
  s.bs_gain_dbi = 46.0;
  s.terminal_gain_dbi = 10.0;
  return s;
}

Outcome aperture_solve() {
  const auto s = reference_link();
  const double sigma = db_to_linear(required_rcs_dbsm(s, -60.0));
  const double d = solve_aperture_size(sigma, 0.25, s.geometry.incident, s.geometry.outgoing, f140);
  const auto n = element_count(ApertureSpec::half_wavelength(d, f140, 0.25));
  const double deviation = static_cast<double>(n) / 10540.0 - 1.0;
  return {d >= 0.105 && d <= 0.112 && std::abs(deviation) <= 0.03,
          fmt("D = %.2f mm (want 105..112), N = %lld (%+.2f%% vs 10540, want within 3%%)", d * 1e3,
              static_cast<long long>(n), 100.0 * deviation)};
}

Outcome sensitivity_reconstruction() {
  const double s = sensitivity(ReceiverSpec{});
  return {std::abs(s + 60.0) <= 1.0, fmt("4-QAM, NF 7 dB, 2 GHz, BER 1e-6 -> %.3f dBm (want -60 +/- 1)", s)};
}

Outcome beam_squint() {
  const auto a = ApertureSpec::half_wavelength(0.08, f140);
  const TaperSpec taper{-10.0};
  const auto bw = [&](double theta_deg, const TaperSpec& t) {
    return cli::detail::squint_auto_span(a, Direction::broadside(), Direction::degrees(theta_deg), t, SquintOptions{})
        .bw_3db_hz;
  };
  const double bw45 = bw(45.0, taper), bw60 = bw(60.0, taper);
  bool decreasing = true;
  double previous = 0.0;
  std::string trend;
  for (int theta = 10; theta <= 70; theta += 5) {
    const double b = bw(theta, taper);
    if (theta > 10 && !(b < previous)) decreasing = false;
    previous = b;
    trend += fmt("%s%.2f", theta > 10 ? " " : "", b / 1e9);
  }
  const bool ok45 = std::abs(bw45 / 4.2e9 - 1.0) <= 0.25;
  const bool ok60 = std::abs(bw60 / 2.4e9 - 1.0) <= 0.25;
  const double uni45 = bw(45.0, TaperSpec::uniform()), uni60 = bw(60.0, TaperSpec::uniform());
  return {ok45 && ok60 && decreasing,
          fmt("BW_3dB(45) = %.3f GHz [%s, want 3.15..5.25], BW_3dB(60) = %.3f GHz [%s, want 1.80..3.00], "
              "10..70 deg step 5: %s GHz [%s]; uniform-taper reference: %.3f / %.3f GHz",
              bw45 / 1e9, ok45 ? "ok" : "out", bw60 / 1e9, ok60 ? "ok" : "out", trend.c_str(),
              decreasing ? "strictly decreasing" : "NOT strictly decreasing", uni45 / 1e9, uni60 / 1e9)};
}

Outcome quantization_losses() {
  const auto a = ApertureSpec::from_cells(100, f140);
  const std::vector<int> bits = {1, 2, 3};
  const auto report = quantization_loss(a, Direction::degrees(45.0), bits, TaperSpec::uniform());
  const double want[] = {3.9, 0.9, 0.22};
  const double tol[] = {0.5, 0.3, 0.15};
  bool ok = true;
  std::string detail = fmt("continuous peak %.3f dBi;", report.continuous_peak_dbi);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& e = report.entries[i];
    ok = ok && std::abs(e.loss_db - want[i]) <= tol[i];
    detail += fmt(" %d-bit loss %.3f dB (want %.2f +/- %.2f, sinc law %.3f);", e.bits, e.loss_db, want[i], tol[i],
                  e.analytical_loss_db);
  }
  return {ok, detail};
}

Outcome directivity_anchor() {
  const auto a = ApertureSpec::from_cells(100, f140);
  const auto p = synthesize_profile(a, Direction::broadside(), Direction::broadside(), TaperSpec::uniform());
  const auto d = directivity(p, f140);
  const double expected = 10.0 * std::log10(4.0 * pi * 2500.0);
  return {std::abs(d.peak_directivity_dbi - 44.97) <= 0.3,
          fmt("peak %.4f dBi (4*pi*A/lambda^2 = %.4f dBi, want 44.97 +/- 0.3)", d.peak_directivity_dbi, expected)};
}

Outcome fft_oracle() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> amp(0.0, 1.0), ph(0.0, two_pi), ang(0.0, 60.0), az(0.0, 360.0),
      scale(0.9, 1.1);
  double worst = 0.0;
  std::size_t points = 0;
  for (int n : {8, 17, 100}) {
    std::vector<Complex> c(static_cast<std::size_t>(n) * n);
    for (auto& v : c) v = std::polar(amp(rng), ph(rng));
    const double pitch = f140.wavelength() / 2;
    const auto incident = Direction::degrees(ang(rng), az(rng));
    const PhaseProfile p =
        PhaseProfile({n, n, pitch, pitch}, std::move(c), f140).with_steering(incident, incident);
    const Frequency f(140e9 * scale(rng));
    const auto lattice = array_factor_fft(p, f, 2);
    // Every lattice point on the small grids; a stride on the large one.
    const std::size_t stride = n == 100 ? 13 : 1;
    std::vector<Direction> dirs;
    std::vector<Complex> fast;
    std::size_t k = 0;
    for (std::size_t i0 = 0; i0 < lattice.axis0.size(); ++i0)
      for (std::size_t i1 = 0; i1 < lattice.axis1.size(); ++i1) {
        const double u = lattice.axis1[i1], v = lattice.axis0[i0];
        if (u * u + v * v >= 0.999 || k++ % stride) continue;
        dirs.push_back(detail::direction_from_uv(u, v));
        fast.push_back(lattice.field[lattice.index(i0, i1)]);
      }
    const auto direct = array_factor_direct(p, f, dirs);
    double peak = 0.0;
    for (const auto& e : direct) peak = std::max(peak, std::abs(e));
    for (std::size_t i = 0; i < direct.size(); ++i) worst = std::max(worst, std::abs(direct[i] - fast[i]) / peak);
    points += dirs.size();
  }
  return {worst < 1e-9, fmt("max relative error %.3e over %zu lattice points on 8x8, 17x17, 100x100 (want < 1e-9)",
                            worst, points)};
}

Outcome inverse_consistency() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> side(0.005, 1.0), eta(1e-3, 1.0), angle(0.0, 85.0), ghz(30.0, 1000.0),
      sens(-100.0, -20.0);
  double worst_size = 0.0, worst_db = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto f = Frequency::ghz(ghz(rng));
    const auto in = Direction::degrees(angle(rng), 0.0);
    const auto out = Direction::degrees(angle(rng), 180.0);
    const ApertureSpec a = ApertureSpec::half_wavelength(side(rng), f, eta(rng));
    const double back = solve_aperture_size(rcs(a, in, out), a.efficiency(), in, out, f);
    worst_size = std::max(worst_size, std::abs(back / a.side() - 1.0));
    LinkScenario s = reference_link();
    s.frequency = f;
    const double target = sens(rng);
    worst_db = std::max(worst_db, std::abs(received_power_dbm(s, required_rcs_dbsm(s, target)) - target));
  }
  return {worst_size < 1e-9 && worst_db < 1e-9,
          fmt("1000 draws: size round-trip %.2e relative, budget closure %.2e dB (want < 1e-9)", worst_size, worst_db)};
}

Outcome pec_bound() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> eta(1e-9, 1.0), angle(0.0, 89.0);
  int violations = 0;
  const ApertureSpec a = ApertureSpec::half_wavelength(0.11, f140);
  for (int i = 0; i < 1000; ++i) {
    const auto in = Direction::degrees(angle(rng));
    const auto out = Direction::degrees(angle(rng), 180.0);
    if (!pec_bound_check(a.with_efficiency(eta(rng)), in, out)) ++violations;
  }
  return {violations == 0, fmt("%d of 1000 random efficiencies exceed the eta = 1 RCS", violations)};
}

Outcome efficiency_ledger() {
  const double eta = EfficiencyLedger{}.resulting_eff();
  return {std::abs(eta - 0.25) <= 0.005, fmt("50%% x 3 dB -> %.2f%% (want 25 +/- 0.5 points)", 100.0 * eta)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"aperture solve reproduction", aperture_solve},
      {"sensitivity reconstruction", sensitivity_reconstruction},
      {"beam-squint bandwidths", beam_squint},
      {"quantization losses", quantization_losses},
      {"analytical directivity anchor", directivity_anchor},
      {"FFT vs direct oracle", fft_oracle},
      {"inverse consistency", inverse_consistency},
      {"PEC bound", pec_bound},
      {"efficiency ledger", efficiency_ledger},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s criterion %zu [%s] (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                seconds, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
