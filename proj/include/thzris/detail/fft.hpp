#pragma once

// Thin RAII wrapper over FFTW's 2-D complex transform.

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

namespace thzris::detail {

// FFTW's planner is not thread-safe.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// Unnormalised 2-D DFT with positive exponent:
/// out[k0][k1] = Σ in[j0][j1] · exp(+2πi (j0 k0 / n0 + j1 k1 / n1)).
inline std::vector<std::complex<double>> dft2_positive(std::span<const std::complex<double>> input, int n0, int n1) {
  const auto total = static_cast<std::size_t>(n0) * static_cast<std::size_t>(n1);
  if (input.size() != total) throw std::invalid_argument("dft2_positive: size mismatch");
  struct FftwFree {
    void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
  };
  std::unique_ptr<fftw_complex, FftwFree> in(fftw_alloc_complex(total));
  std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(total));
  if (!in || !out) throw std::bad_alloc();
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_2d(n0, n1, in.get(), out.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
  std::memcpy(in.get(), input.data(), total * sizeof(fftw_complex));
  fftw_execute(plan);
  std::vector<std::complex<double>> result(total);
  std::memcpy(static_cast<void*>(result.data()), out.get(), total * sizeof(fftw_complex));
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return result;
}

}  // namespace thzris::detail
