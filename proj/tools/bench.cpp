// Serial vs OpenMP timing for the data-parallel kernels: the positive-axis
// |D_eps| scan (all three dimensions) and resolvent-kernel sampling.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "resonance/scan.hpp"

namespace {

double time_ms(const std::function<void()>& fn, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main() {
  using namespace resonance;
  std::printf("threads available: %d (RESONANCE_SOLVER_THREADS=%d)\n", omp_get_max_threads(),
              scan::solver_threads());
  std::printf("%-28s %12s %12s %9s\n", "kernel", "serial [ms]", "openmp [ms]", "speedup");

  const auto grid = scan::log_grid(1e-6, 10.0, 1000000);
  for (int d = 1; d <= 3; ++d) {
    dispersion::ModelParams p{riemann::Dimension(d), 0.7, -0.4, 1.0, 0.05};
    std::vector<double> serial_out, parallel_out;
    const double ts = time_ms([&] { serial_out = scan::abs_dispersion_profile(p, grid); });
    const double tp =
        time_ms([&] { parallel_out = scan::abs_dispersion_profile_parallel(p, grid); });
    const bool same = serial_out == parallel_out;
    std::printf("%-25s d=%d %12.1f %12.1f %8.2fx%s\n", "dispersion scan (1e6 pts)", d, ts, tp,
                ts / tp, same ? "" : "  MISMATCH");
  }

  {
    dispersion::ModelParams p{riemann::Dimension(2), 0.7, -0.4, 1.0, 0.05};
    std::vector<double> xs(20000);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = 0.05 + 5.0 * i / (xs.size() - 1);
    const riemann::SheetPoint z{{-0.5, 0.0}, 0};
    std::vector<riemann::Complex> a, b;
    const double ts = time_ms([&] { a = scan::kernel_profile(p, z, 0, 1, 1, xs, 1.0); });
    const double tp = time_ms([&] { b = scan::kernel_profile_parallel(p, z, 0, 1, 1, xs, 1.0); });
    const bool same = a == b;
    std::printf("%-28s %12.1f %12.1f %8.2fx%s\n", "d=2 kernel slice (2e4 pts)", ts, tp, ts / tp,
                same ? "" : "  MISMATCH");
  }
  return 0;
}
