#include "resonance/riemann.hpp"

#include <cmath>

namespace resonance::riemann {

double sheet_arg(const SheetPoint& p) {
  const double a = std::arg(p.value);  // principal, (-pi, pi]
  if (p.sheet == 0) return a < 0.0 ? a + 2.0 * pi : a;
  return a > 0.0 ? a - 2.0 * pi : a;
}

Complex sheet_sqrt(const SheetPoint& p) {
  if (p.value == 0.0) throw std::domain_error("sheet_sqrt: branch point z = 0");
  // Principal sqrt has arg in (-pi/2, pi/2]; flipping the sign moves it into
  // the other half-plane, which realizes the per-sheet window exactly and
  // keeps full precision (no polar round trip).
  const Complex s = std::sqrt(p.value);
  if (p.sheet == 0) return s.imag() < 0.0 ? -s : s;
  return s.imag() > 0.0 ? -s : s;
}

Complex sheet_log(const SheetPoint& p) {
  if (p.value == 0.0) throw std::domain_error("sheet_log: branch point z = 0");
  return {std::log(std::abs(p.value)), sheet_arg(p)};
}

Complex g_function(const SheetPoint& p) {
  return (0.5 * sheet_log(p) - Complex(0.0, 0.5 * pi)) / (2.0 * pi) - 1.0 / coupling_scale_a();
}

Complex green_kernel(Dimension d, const SheetPoint& p, double x) {
  if (p.value == 0.0) throw std::domain_error("green_kernel: branch point z = 0");
  if (x < 0.0) throw std::domain_error("green_kernel: x must be >= 0");
  const Complex sz = sheet_sqrt(p);
  const Complex i(0.0, 1.0);
  switch (d.value()) {
    case 1:
      return i * std::exp(i * sz * x) / (2.0 * sz);
    case 2:
      if (x == 0.0) throw std::domain_error("green_kernel: d = 2 kernel singular at x = 0");
      return 0.25 * i * hankel_h1_0(sz * x);
    default:
      if (x == 0.0) throw std::domain_error("green_kernel: d = 3 kernel singular at x = 0");
      return std::exp(i * sz * x) / (4.0 * pi * x);
  }
}

}  // namespace resonance::riemann
