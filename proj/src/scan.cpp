#include "resonance/scan.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace resonance::scan {

int solver_threads() {
  const char* env = std::getenv("RESONANCE_SOLVER_THREADS");
  if (!env) return 0;
  const int n = std::atoi(env);
  return n > 0 ? n : 0;
}

namespace {
int effective_threads() {
  const int cap = solver_threads();
  return cap > 0 ? cap : omp_get_max_threads();
}

double abs_dispersion_at(const ModelParams& p, double lambda) {
  if (p.dim.value() == 2 && (lambda == 0.0 || lambda == 1.0))
    return std::numeric_limits<double>::infinity();
  return std::abs(dispersion::d_epsilon(p, {Complex(lambda, 0.0), 0}, 0));
}
}  // namespace

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw std::invalid_argument("log_grid: need 0 < lo < hi and n >= 2");
  std::vector<double> g(n);
  const double step = (std::log(hi) - std::log(lo)) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = std::exp(std::log(lo) + step * i);
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> abs_dispersion_profile(const ModelParams& p, std::span<const double> grid) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = abs_dispersion_at(p, grid[i]);
  return out;
}

std::vector<double> abs_dispersion_profile_parallel(const ModelParams& p,
                                                    std::span<const double> grid) {
  std::vector<double> out(grid.size());
  const std::size_t n = grid.size();
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (std::size_t i = 0; i < n; ++i) out[i] = abs_dispersion_at(p, grid[i]);
  return out;
}

double positive_axis_scan(const ModelParams& p, std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("positive_axis_scan: empty grid");
  const std::size_t n = grid.size();
  double best = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(min : best) \
    num_threads(effective_threads())
  for (std::size_t i = 0; i < n; ++i) best = std::min(best, abs_dispersion_at(p, grid[i]));
  return best;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<Complex> kernel_profile(const ModelParams& p, const riemann::SheetPoint& z,
                                    int z_minus_1_sheet, int channel_i, int channel_j,
                                    std::span<const double> xs, double xp) {
  std::vector<Complex> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    out[i] = dispersion::resolvent_correction_kernel(p, z, z_minus_1_sheet, xs[i], xp, channel_i,
                                                     channel_j);
  return out;
}

std::vector<Complex> kernel_profile_parallel(const ModelParams& p, const riemann::SheetPoint& z,
                                             int z_minus_1_sheet, int channel_i, int channel_j,
                                             std::span<const double> xs, double xp) {
  std::vector<Complex> out(xs.size());
  const std::size_t n = xs.size();
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (std::size_t i = 0; i < n; ++i)
    out[i] = dispersion::resolvent_correction_kernel(p, z, z_minus_1_sheet, xs[i], xp, channel_i,
                                                     channel_j);
  return out;
}

}  // namespace resonance::scan
