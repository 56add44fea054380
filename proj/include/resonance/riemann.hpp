#pragma once

// Sheet-aware elementary functions on the two-sheeted Riemann surface of
// sqrt(z)/log(z), the free Green's functions G^z in d = 1,2,3, and the
// Hankel function H0^(1) needed by the d = 2 kernel.
//
// Sheet conventions:
//   sheet  0 ("physical"):   arg(z) in [0, 2pi),  Im(sqrt z) >= 0
//   sheet -1 ("unphysical"): arg(z) in (-2pi, 0], Im(sqrt z) <= 0
// On each sheet arg(sqrt z) = arg(z)/2. Positive reals carry arg = 0 on
// both sheets, so continuation from the upper half-plane through the cut
// [0, inf) is continuous in the lower half-plane of sheet -1.

#include <complex>
#include <numbers>
#include <stdexcept>

namespace resonance::riemann {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double euler_gamma = std::numbers::egamma;

/// a = 2*pi/(ln 2 - gamma), the d = 2 threshold coupling (about 54.2).
/// Always computed from the closed form, never hard-coded.
inline double coupling_scale_a() { return 2.0 * pi / (std::numbers::ln2 - euler_gamma); }

struct SheetPoint {
  Complex value{};
  int sheet = 0;  // 0 or -1
};

/// Spatial dimension of the model; only d = 1, 2, 3 are admissible.
class Dimension {
 public:
  explicit Dimension(int d) : d_(d) {
    if (d < 1 || d > 3) throw std::invalid_argument("Dimension: d must be 1, 2 or 3");
  }
  int value() const { return d_; }

 private:
  int d_;
};

/// arg(z) mapped into the window of the given sheet.
double sheet_arg(const SheetPoint& p);

/// sqrt on the given sheet; throws std::domain_error at the branch point 0.
Complex sheet_sqrt(const SheetPoint& p);

/// log on the given sheet; throws std::domain_error at 0.
Complex sheet_log(const SheetPoint& p);

/// g(z) = [ln(sqrt z) - i pi/2]/(2 pi) - 1/a on the given sheet.
Complex g_function(const SheetPoint& p);

/// H0^(1)(eta). Dispatches between the ascending series (|eta| < 6) and the
/// integral-representation quadrature (|eta| >= 6). The two methods agree to
/// better than 1e-9 relative throughout the overlap annulus 2 <= |eta| <= 10,
/// Im(eta) >= 0. Throws std::domain_error at 0 and for arguments outside the
/// supported region, std::overflow_error for strongly negative Im(eta).
Complex hankel_h1_0(Complex eta);

/// Ascending series J0 + i Y0, accumulated in extended precision so that the
/// exponential J0/H0 cancellation in the upper half-plane stays below 1e-10
/// relative for |eta| <= 10. Valid for any arg when |eta| is moderate.
Complex hankel_h1_0_series(Complex eta);

/// Exact integral representation
///   H0^(1)(z) = sqrt(2/(pi z)) e^{i(z-pi/4)} pi^{-1/2}
///               Int_{-inf}^{inf} e^{-t^2} (1 + i t^2/(2z))^{-1/2} dt
/// evaluated by Gauss-Hermite quadrature. Machine precision for |z| >= 2 with
/// Im(z) >= 0 (the singularity t^2 = 2iz stays away from the contour there).
Complex hankel_h1_0_integral(Complex eta);

/// Fundamental solution of the Helmholtz equation (-Lap - z) G^z = delta:
///   d=1: i e^{i sqrt(z) x}/(2 sqrt z)
///   d=2: (i/4) H0^(1)(sqrt(z) x)
///   d=3: e^{i sqrt(z) x}/(4 pi x)
/// x = |x| >= 0 (x > 0 required for d = 2,3).
Complex green_kernel(Dimension d, const SheetPoint& p, double x);

}  // namespace resonance::riemann
