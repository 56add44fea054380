#include "resonance/riemann.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace resonance::riemann {

namespace {

using LComplex = std::complex<long double>;

constexpr long double lpi = 3.14159265358979323846264338327950288L;
constexpr long double lgamma_e = 0.57721566490153286060651209008240243L;

// --- ascending series -------------------------------------------------------
//
// H0 = sum_k t_k [1 + (2i/pi)(L - H_k)],  t_k = (-z^2/4)^k/(k!)^2,
// L = ln(z/2) + gamma, H_k = 1 + 1/2 + ... + 1/k.
//
// J0 and Y0 individually grow like e^{|Im z|} while H0^(1) decays, so the
// combination cancels by a factor up to e^{2 Im z}; at |z| = 10 that eats
// about seven decimal digits. The whole sum therefore runs in 80-bit
// arithmetic, which keeps the relative error of the double result below
// 1e-10 across the overlap annulus.

LComplex h1_0_series_impl(LComplex z) {
  const LComplex q = -z * z / 4.0L;
  LComplex term(1.0L, 0.0L);    // t_k
  LComplex sum_t = term;        // J0
  LComplex sum_th(0.0L, 0.0L);  // sum t_k H_k
  long double hk = 0.0L;
  for (int k = 1; k <= 120; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    hk += 1.0L / k;
    sum_t += term;
    sum_th += term * hk;
    if (std::abs(term) * (hk + 1.0L) < 1e-24L * (std::abs(sum_t) + std::abs(sum_th)) && k > 8) break;
  }
  const LComplex L = std::log(z / 2.0L) + lgamma_e;
  const LComplex two_i_over_pi(0.0L, 2.0L / lpi);
  return sum_t + two_i_over_pi * (L * sum_t - sum_th);
}

// --- Gauss-Hermite nodes ----------------------------------------------------
//
// Orthonormal recurrence p_{k+1}(t) = t sqrt(2/(k+1)) p_k - sqrt(k/(k+1)) p_{k-1}
// with p_0 = pi^{-1/4}. Roots located by a sign-change sweep plus Newton
// polish; weights w_i = 2 / (p_n'(t_i))^2. Deterministic, computed once.

struct HermiteRule {
  std::vector<double> nodes;    // positive nodes only (rule is symmetric)
  std::vector<double> weights;  // matching weights; halved node t=0 excluded (n even)
};

void hermite_eval(int n, double t, double& pn, double& dpn) {
  double pm1 = 0.0;
  double p = 0.75112554446494248;  // pi^{-1/4}
  for (int k = 0; k < n; ++k) {
    const double pnew = t * std::sqrt(2.0 / (k + 1)) * p - std::sqrt(double(k) / (k + 1)) * pm1;
    pm1 = p;
    p = pnew;
  }
  pn = p;
  dpn = std::sqrt(2.0 * n) * pm1;  // p_n' = sqrt(2n) p_{n-1}
}

HermiteRule build_hermite_rule(int n) {
  HermiteRule rule;
  const double tmax = std::sqrt(2.0 * n + 1.0) + 1.0;
  const int sweeps = 20 * n;
  double prev_t = 0.0, prev_p, dummy;
  hermite_eval(n, prev_t, prev_p, dummy);
  for (int i = 1; i <= sweeps; ++i) {
    const double t = tmax * i / sweeps;
    double p, dp;
    hermite_eval(n, t, p, dp);
    if (prev_p == 0.0 || (prev_p > 0) != (p > 0)) {
      double root = t - tmax / sweeps / 2.0;
      for (int it = 0; it < 60; ++it) {
        double pr, dpr;
        hermite_eval(n, root, pr, dpr);
        const double step = pr / dpr;
        root -= step;
        if (std::abs(step) <= 1e-15 * std::abs(root) + 1e-300) break;
      }
      double pr, dpr;
      hermite_eval(n, root, pr, dpr);
      rule.nodes.push_back(root);
      rule.weights.push_back(2.0 / (dpr * dpr));
    }
    prev_p = p;
  }
  return rule;
}

const HermiteRule& hermite96() {
  static const HermiteRule rule = build_hermite_rule(96);
  return rule;
}

}  // namespace

Complex hankel_h1_0_series(Complex eta) {
  if (eta == 0.0) throw std::domain_error("hankel_h1_0: logarithmic branch point eta = 0");
  const LComplex v = h1_0_series_impl(LComplex(eta.real(), eta.imag()));
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

Complex hankel_h1_0_integral(Complex eta) {
  if (eta == 0.0) throw std::domain_error("hankel_h1_0: logarithmic branch point eta = 0");
  const auto& rule = hermite96();
  const Complex i(0.0, 1.0);
  Complex s(0.0, 0.0);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double t2 = rule.nodes[k] * rule.nodes[k];
    s += rule.weights[k] / std::sqrt(1.0 + i * t2 / (2.0 * eta));
  }
  s *= 2.0;  // integrand is even in t; rule stores positive nodes only
  return std::sqrt(2.0 / (pi * eta)) * std::exp(i * (eta - pi / 4.0)) * s / std::sqrt(pi);
}

Complex hankel_h1_0(Complex eta) {
  if (eta == 0.0) throw std::domain_error("hankel_h1_0: logarithmic branch point eta = 0");
  if (eta.imag() < -60.0)
    throw std::overflow_error("hankel_h1_0: H0^(1) grows like e^{|Im eta|} for Im eta < 0");
  if (std::abs(eta) < 6.0) return hankel_h1_0_series(eta);
  if (eta.imag() < 0.0)
    throw std::domain_error("hankel_h1_0: large |eta| supported only for Im eta >= 0");
  return hankel_h1_0_integral(eta);
}

}  // namespace resonance::riemann
