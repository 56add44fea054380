#include "resonance/dispersion.hpp"

#include <cmath>

namespace resonance::dispersion {

namespace {

using riemann::coupling_scale_a;
using riemann::pi;

const Complex I(0.0, 1.0);

// sqrt(z) on the sheet, with the continuous limit 0 at the branch point.
// The d = 1,3 dispersion formulas are polynomial in the roots, so they stay
// finite there even though the public sheet_sqrt treats 0 as an error.
Complex sqrt_or_zero(const SheetPoint& p) {
  if (p.value == 0.0) return {0.0, 0.0};
  return riemann::sheet_sqrt(p);
}

// principal ln(1+w), accurate for small |w|
Complex clog1p(Complex w) {
  const double re = 0.5 * std::log1p(2.0 * w.real() + std::norm(w));
  const double im = std::atan2(w.imag(), 1.0 + w.real());
  return {re, im};
}

void check_d2_branch_points(const ModelParams& p, const SheetPoint& z) {
  if (p.dim.value() == 2 && (z.value == 0.0 || z.value == 1.0))
    throw std::domain_error("d_epsilon: d = 2 formula has logarithmic branch points at z = 0, 1");
}

}  // namespace

double ModelParams::theta1_eps() const {
  switch (dim.value()) {
    case 1: return 2.0 + c * epsilon;
    case 2: return coupling_scale_a() + c * epsilon;
    default: return -4.0 * pi + c * epsilon;
  }
}

void ModelParams::validate() const {
  if (epsilon < 0.0) throw std::invalid_argument("ModelParams: epsilon must be >= 0");
  if (!(std::isfinite(theta0) && std::isfinite(c) && std::isfinite(b) && std::isfinite(epsilon)))
    throw std::invalid_argument("ModelParams: non-finite parameter");
}

Complex d_epsilon(const ModelParams& p, const SheetPoint& z, int z_minus_1_sheet) {
  check_d2_branch_points(p, z);
  const double eps = p.epsilon;
  const SheetPoint zm1{z.value - 1.0, z_minus_1_sheet};
  switch (p.dim.value()) {
    case 1: {
      const Complex sz = sqrt_or_zero(z);
      const Complex sz1 = sqrt_or_zero(zm1);
      return p.b * p.b * eps * eps -
             (p.theta0 + 2.0 * I * sz) * (2.0 * (1.0 + I * sz1) + p.c * eps);
    }
    case 2: {
      const double a = coupling_scale_a();
      const double B = p.theta0 * (a + p.c * eps) - p.b * p.b * eps * eps;
      return (a + p.c * eps + B * riemann::g_function(z)) *
                 (p.theta0 + B * riemann::g_function(zm1)) -
             p.b * p.b * eps * eps;
    }
    default: {
      const Complex sz = sqrt_or_zero(z);
      const Complex sz1 = sqrt_or_zero(zm1);
      return (1.0 - I * p.theta0 / (4.0 * pi) * sz) *
                 (1.0 + I * (1.0 - p.c * eps / (4.0 * pi)) * sz1) +
             std::pow(p.b * eps / (4.0 * pi), 2) * sz1 * sz;
    }
  }
}

Complex d_epsilon_derivative(const ModelParams& p, const SheetPoint& z, int z_minus_1_sheet) {
  check_d2_branch_points(p, z);
  const double eps = p.epsilon;
  const SheetPoint zm1{z.value - 1.0, z_minus_1_sheet};
  switch (p.dim.value()) {
    case 1: {
      const Complex sz = riemann::sheet_sqrt(z);
      const Complex sz1 = riemann::sheet_sqrt(zm1);
      return -((I / sz) * (2.0 * (1.0 + I * sz1) + p.c * eps) +
               (p.theta0 + 2.0 * I * sz) * (I / sz1));
    }
    case 2: {
      const double a = coupling_scale_a();
      const double B = p.theta0 * (a + p.c * eps) - p.b * p.b * eps * eps;
      const Complex P = a + p.c * eps + B * riemann::g_function(z);
      const Complex Q = p.theta0 + B * riemann::g_function(zm1);
      return B * (Q / (4.0 * pi * z.value) + P / (4.0 * pi * (z.value - 1.0)));
    }
    default: {
      const Complex sz = riemann::sheet_sqrt(z);
      const Complex sz1 = riemann::sheet_sqrt(zm1);
      const Complex beta = 1.0 - p.c * eps / (4.0 * pi);
      const double w = std::pow(p.b * eps / (4.0 * pi), 2);
      return (-I * p.theta0 / (8.0 * pi * sz)) * (1.0 + I * beta * sz1) +
             (1.0 - I * p.theta0 / (4.0 * pi) * sz) * (I * beta / (2.0 * sz1)) +
             w * (sz / (2.0 * sz1) + sz1 / (2.0 * sz));
    }
  }
}

Complex d_epsilon_stable(const ModelParams& p, const SheetPoint& z, int z_minus_1_sheet) {
  if (std::abs(z.value) >= 0.5 || z_minus_1_sheet != 0)
    return d_epsilon(p, z, z_minus_1_sheet);
  const double eps = p.epsilon;
  // On sheet 0 with Re z < 1, sqrt(z-1) = i sqrt(1-z) with the principal root.
  const Complex s1mz = std::sqrt(1.0 - z.value);
  switch (p.dim.value()) {
    case 1: {
      const Complex sz = sqrt_or_zero(z);
      // 1 + i sqrt(z-1) = 1 - sqrt(1-z) = z/(1 + sqrt(1-z))
      const Complex w1 = z.value / (1.0 + s1mz);
      return p.b * p.b * eps * eps - (p.theta0 + 2.0 * I * sz) * (2.0 * w1 + p.c * eps);
    }
    case 2: {
      if (z.value == 0.0)
        throw std::domain_error("d_epsilon: d = 2 formula has logarithmic branch points at z = 0, 1");
      const double a = coupling_scale_a();
      const double B = p.theta0 * (a + p.c * eps) - p.b * p.b * eps * eps;
      const Complex P = a + p.c * eps + B * riemann::g_function(z);
      // Q = theta0 + B g(z-1), with theta0 - B/a = (b^2 e^2 - theta0 c e)/a exactly
      // and g(z-1) = ln(1-z)/(4 pi) - 1/a on sheet 0.
      const Complex Q =
          (p.b * p.b * eps * eps - p.theta0 * p.c * eps) / a + B * clog1p(-z.value) / (4.0 * pi);
      return P * Q - p.b * p.b * eps * eps;
    }
    default: {
      const Complex sz = sqrt_or_zero(z);
      const Complex beta = 1.0 - p.c * eps / (4.0 * pi);
      // 1 + i beta sqrt(z-1) = 1 - beta sqrt(1-z) = (1 - beta^2 + beta^2 z)/(1 + beta sqrt(1-z))
      const double one_minus_beta2 = (p.c * eps / (4.0 * pi)) * (2.0 - p.c * eps / (4.0 * pi));
      const Complex w3 = (one_minus_beta2 + beta * beta * z.value) / (1.0 + beta * s1mz);
      return (1.0 - I * p.theta0 / (4.0 * pi) * sz) * w3 +
             std::pow(p.b * eps / (4.0 * pi), 2) * (I * s1mz) * sz;
    }
  }
}

Complex d_epsilon_stable_derivative(const ModelParams& p, const SheetPoint& z, int z_minus_1_sheet) {
  if (std::abs(z.value) >= 0.5 || z_minus_1_sheet != 0)
    return d_epsilon_derivative(p, z, z_minus_1_sheet);
  const double eps = p.epsilon;
  const Complex s1mz = std::sqrt(1.0 - z.value);
  switch (p.dim.value()) {
    case 1: {
      const Complex sz = riemann::sheet_sqrt(z);
      const Complex w1 = z.value / (1.0 + s1mz);
      // d/dz [1 - sqrt(1-z)] = 1/(2 sqrt(1-z))
      return -((I / sz) * (2.0 * w1 + p.c * eps) +
               (p.theta0 + 2.0 * I * sz) * (1.0 / s1mz));
    }
    case 2: {
      const double a = coupling_scale_a();
      const double B = p.theta0 * (a + p.c * eps) - p.b * p.b * eps * eps;
      const Complex P = a + p.c * eps + B * riemann::g_function(z);
      const Complex Q =
          (p.b * p.b * eps * eps - p.theta0 * p.c * eps) / a + B * clog1p(-z.value) / (4.0 * pi);
      return B * (Q / (4.0 * pi * z.value) + P / (4.0 * pi * (z.value - 1.0)));
    }
    default: {
      const Complex sz = riemann::sheet_sqrt(z);
      const Complex beta = 1.0 - p.c * eps / (4.0 * pi);
      const double one_minus_beta2 = (p.c * eps / (4.0 * pi)) * (2.0 - p.c * eps / (4.0 * pi));
      const Complex w3 = (one_minus_beta2 + beta * beta * z.value) / (1.0 + beta * s1mz);
      const double w = std::pow(p.b * eps / (4.0 * pi), 2);
      // d/dz [1 - beta sqrt(1-z)] = beta/(2 sqrt(1-z));
      // d/dz [i sqrt(1-z) sqrt(z)] = i (sqrt(1-z)/(2 sqrt z) - sqrt(z)/(2 sqrt(1-z)))
      return (-I * p.theta0 / (8.0 * pi * sz)) * w3 +
             (1.0 - I * p.theta0 / (4.0 * pi) * sz) * (beta / (2.0 * s1mz)) +
             w * I * (s1mz / (2.0 * sz) - sz / (2.0 * s1mz));
    }
  }
}

GammaMatrix gamma_matrix(const ModelParams& p, const SheetPoint& z, int z_minus_1_sheet) {
  check_d2_branch_points(p, z);
  const double eps = p.epsilon;
  const double be = p.b * eps;
  const SheetPoint zm1{z.value - 1.0, z_minus_1_sheet};
  GammaMatrix m;
  switch (p.dim.value()) {
    case 1: {
      const Complex sz = sqrt_or_zero(z);
      const Complex sz1 = sqrt_or_zero(zm1);
      m.g11 = -2.0 * I * sz * (-be * be + p.theta0 * (2.0 + 2.0 * I * sz1 + p.c * eps));
      m.g12 = 4.0 * be * sz1 * sz;
      m.g22 = -2.0 * I * sz1 * (-be * be + (2.0 + p.c * eps) * (2.0 * I * sz + p.theta0));
      break;
    }
    case 2: {
      const double a = coupling_scale_a();
      const double B = p.theta0 * (a + p.c * eps) - be * be;
      m.g11 = (p.theta0 + B * riemann::g_function(zm1)) * B;
      m.g12 = be * B;
      m.g22 = (a + p.c * eps + B * riemann::g_function(z)) * B;
      break;
    }
    default: {
      const Complex sz = sqrt_or_zero(z);
      const Complex sz1 = sqrt_or_zero(zm1);
      m.g11 = p.theta0 * (1.0 + I * (1.0 - p.c * eps / (4.0 * pi)) * sz1) -
              be * be * sz1 * (-I / (4.0 * pi));
      m.g12 = be;
      m.g22 = (-4.0 * pi + p.c * eps) * (1.0 - I * p.theta0 / (4.0 * pi) * sz) -
              be * be * sz * (-I / (4.0 * pi));
      break;
    }
  }
  m.g21 = m.g12;  // shared subexpression: symmetry holds bit-exactly
  return m;
}

Complex resolvent_correction_kernel(const ModelParams& p, const SheetPoint& z,
                                    int z_minus_1_sheet, double x, double xp,
                                    int channel_i, int channel_j) {
  if (channel_i < 0 || channel_i > 1 || channel_j < 0 || channel_j > 1)
    throw std::invalid_argument("resolvent_correction_kernel: channels are 0 and 1");
  const Complex den = d_epsilon(p, z, z_minus_1_sheet);
  if (std::abs(den) < 1e-300)
    throw PoleError("resolvent_correction_kernel: D_eps(z) = 0 (spectral singularity)");
  const GammaMatrix m = gamma_matrix(p, z, z_minus_1_sheet);
  const Complex gij = channel_i == 0 ? (channel_j == 0 ? m.g11 : m.g12)
                                     : (channel_j == 0 ? m.g21 : m.g22);
  const SheetPoint zi = channel_i == 0 ? z : SheetPoint{z.value - 1.0, z_minus_1_sheet};
  const SheetPoint zj = channel_j == 0 ? z : SheetPoint{z.value - 1.0, z_minus_1_sheet};
  return gij / den * riemann::green_kernel(p.dim, zi, x) * riemann::green_kernel(p.dim, zj, xp);
}

double decoupled_eigenvalue(const ModelParams& p) {
  const double t1 = p.theta1_eps();
  switch (p.dim.value()) {
    case 1: return 1.0 - t1 * t1 / 4.0;
    case 2: return 1.0 - std::exp(4.0 * pi * (1.0 / coupling_scale_a() - 1.0 / t1));
    default: return 1.0 - std::pow(4.0 * pi / t1, 2);
  }
}

SpectrumSummary unperturbed_spectrum(const ModelParams& p) {
  if (p.epsilon != 0.0)
    throw std::invalid_argument("unperturbed_spectrum: requires epsilon = 0");
  SpectrumSummary s;
  s.threshold_eigenvalue_present = true;
  const int d = p.dim.value();
  const double th0 = p.theta0;
  if (d == 1 && th0 > 0.0) s.point_spectrum.push_back(-th0 * th0 / 4.0);
  if (d == 2 && th0 != 0.0)
    s.point_spectrum.push_back(-std::exp(4.0 * pi * (1.0 / coupling_scale_a() - 1.0 / th0)));
  if (d == 3 && th0 < 0.0) s.point_spectrum.push_back(-std::pow(4.0 * pi / th0, 2));
  s.point_spectrum.push_back(0.0);
  s.bound_state_profile = [d](int channel, double x) -> Complex {
    if (channel == 0) return {0.0, 0.0};
    const double ax = std::abs(x);
    switch (d) {
      case 1: return {std::exp(-ax), 0.0};
      case 2: return std::sqrt(pi) / 2.0 * riemann::hankel_h1_0(Complex(0.0, ax));
      default: return {std::sqrt(2.0) * std::exp(-ax) / (4.0 * pi * ax), 0.0};
    }
  };
  return s;
}

}  // namespace resonance::dispersion
