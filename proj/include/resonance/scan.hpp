#pragma once

// Data-parallel kernels: the positive-axis |D_eps| scan and spatial sampling
// of the resolvent-correction kernel. Each has an OpenMP version and a serial
// reference; tests compare the two bit-for-bit (every grid point is computed
// independently, so thread count cannot change results).

#include <span>

#include "resonance/dispersion.hpp"

namespace resonance::scan {

using dispersion::ModelParams;
using riemann::Complex;

/// Threads allowed for parallel regions: RESONANCE_SOLVER_THREADS, with 0 or
/// unset meaning the OpenMP default.
int solver_threads();

/// Logarithmically spaced grid on [lo, hi], n >= 2 points.
std::vector<double> log_grid(double lo, double hi, int n);

/// |D_eps(lambda + i0)| on the physical-sheet boundary for each grid lambda;
/// for d = 2 the branch point lambda = 1 maps to +infinity. Serial reference.
std::vector<double> abs_dispersion_profile(const ModelParams& p, std::span<const double> grid);

/// OpenMP version of abs_dispersion_profile; bit-identical to the reference.
std::vector<double> abs_dispersion_profile_parallel(const ModelParams& p,
                                                    std::span<const double> grid);

/// Minimum of |D_eps| over the grid (the no-embedded-eigenvalue probe).
double positive_axis_scan(const ModelParams& p, std::span<const double> grid);

double median(std::vector<double> values);

/// Resolvent-correction kernel K_{ij}(z; x, x') sampled over x for fixed x'.
std::vector<Complex> kernel_profile(const ModelParams& p, const riemann::SheetPoint& z,
                                    int z_minus_1_sheet, int channel_i, int channel_j,
                                    std::span<const double> xs, double xp);
std::vector<Complex> kernel_profile_parallel(const ModelParams& p, const riemann::SheetPoint& z,
                                             int z_minus_1_sheet, int channel_i, int channel_j,
                                             std::span<const double> xs, double xp);

}  // namespace resonance::scan
