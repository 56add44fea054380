#pragma once

// The model's algebraic core: the dispersion function D_eps(z) whose zeros
// are the spectral singularities, the rank-two correction matrix Gamma_eps,
// the resolvent-correction kernel, and the decoupled/unperturbed spectra
// used as anchors.

#include <functional>
#include <stdexcept>
#include <vector>

#include "resonance/riemann.hpp"

namespace resonance::dispersion {

using riemann::Complex;
using riemann::Dimension;
using riemann::SheetPoint;

/// Parameters of H_eps. theta1_eps is derived: 2 + c e (d=1), a + c e (d=2),
/// -4 pi + c e (d=3). b defaults to 1; all shipped regimes use b = 1.
struct ModelParams {
  Dimension dim;
  double theta0 = 0.0;
  double c = 0.0;
  double b = 1.0;
  double epsilon = 0.0;

  double theta1_eps() const;
  void validate() const;  // throws std::invalid_argument on epsilon < 0
};

struct GammaMatrix {
  Complex g11, g12, g21, g22;
};

struct SpectrumSummary {
  std::vector<double> point_spectrum;  // ascending, threshold 0 always last
  bool threshold_eigenvalue_present = true;
  std::function<Complex(int channel, double x)> bound_state_profile;
};

/// Signals that a requested value sits on a pole of the resolvent
/// (D_eps = 0): a spectral singularity, not a fault.
struct PoleError : std::runtime_error {
  explicit PoleError(const std::string& what) : std::runtime_error(what) {}
};

/// D_eps(z) with sqrt(z), ln(z) taken on z.sheet and sqrt(z-1), ln(z-1) on
/// z_minus_1_sheet. Grouped exactly as printed per dimension. Branch-point
/// input is an error only where the formula is singular (d = 2 at z in {0,1});
/// in d = 1,3 the formula is polynomial in the roots and evaluates there.
Complex d_epsilon(const ModelParams& p, const SheetPoint& z, int z_minus_1_sheet);

/// Closed-form derivative dD/dz on fixed sheets (chain rule through the
/// roots and logs; no finite differences).
Complex d_epsilon_derivative(const ModelParams& p, const SheetPoint& z, int z_minus_1_sheet);

/// Algebraically identical regrouping of d_epsilon that avoids the
/// 1 - sqrt(1-z) style cancellations. Requires |z| < 1/2 and the (z-1)
/// branch on sheet 0; used by the Newton oracle and for residuals near the
/// origin, where the printed grouping loses ~eps absolute accuracy.
Complex d_epsilon_stable(const ModelParams& p, const SheetPoint& z, int z_minus_1_sheet);
Complex d_epsilon_stable_derivative(const ModelParams& p, const SheetPoint& z, int z_minus_1_sheet);

GammaMatrix gamma_matrix(const ModelParams& p, const SheetPoint& z, int z_minus_1_sheet);

/// Second term of the resolvent formula:
///   Gamma_{ij}(z)/D_eps(z) * G^{z - kappa_i}(x) * G^{z - kappa_j}(x'),
/// kappa_0 = 0, kappa_1 = 1. Channels are 0 (lower) and 1 (upper).
/// Throws PoleError when D_eps(z) = 0.
Complex resolvent_correction_kernel(const ModelParams& p, const SheetPoint& z,
                                    int z_minus_1_sheet, double x, double xp,
                                    int channel_i, int channel_j);

/// Eigenvalue of the decoupled (b = 0) Hamiltonian near the origin:
///   1 - theta1_eps^2/4 (d=1), 1 - e^{4pi(1/a - 1/theta1_eps)} (d=2),
///   1 - (4pi)^2/theta1_eps^2 (d=3).
double decoupled_eigenvalue(const ModelParams& p);

/// Point spectrum and threshold bound state of H_0 (requires epsilon = 0).
SpectrumSummary unperturbed_spectrum(const ModelParams& p);

}  // namespace resonance::dispersion
