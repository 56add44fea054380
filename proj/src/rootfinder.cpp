#include "resonance/rootfinder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace resonance::rootfinder {

namespace {

using dispersion::d_epsilon;
using dispersion::d_epsilon_stable;
using dispersion::d_epsilon_stable_derivative;
using riemann::coupling_scale_a;
using riemann::pi;

const Complex I(0.0, 1.0);

Complex sqrt_m1(Complex z) {  // sqrt on sheet -1, continuous limit 0 at 0
  if (z == 0.0) return {0.0, 0.0};
  return riemann::sheet_sqrt({z, -1});
}

// exp(w) - 1, accurate for small |w|; the d = 2 recursions map through
// z = 1 - e^{r} with |r| ~ eps, where a plain exp would cancel.
Complex cexpm1(Complex w) {
  const double em = std::expm1(w.real());
  const double cy = std::cos(w.imag());
  const double sy = std::sin(w.imag());
  const double half = std::sin(0.5 * w.imag());
  return {em * cy - 2.0 * half * half, (em + 1.0) * sy};
}

// Magnitude scale of the additive pieces of D_eps, for rounding-floor tests.
double dispersion_scale(const ModelParams& p, const SheetPoint& z, int zm1_sheet) {
  const double eps = p.epsilon;
  const SheetPoint zm1{z.value - 1.0, zm1_sheet};
  const double b2e2 = p.b * p.b * eps * eps;
  switch (p.dim.value()) {
    case 1: {
      const Complex sz = z.value == 0.0 ? Complex{} : riemann::sheet_sqrt(z);
      const Complex sz1 = riemann::sheet_sqrt(zm1);
      return b2e2 + std::abs(p.theta0 + 2.0 * I * sz) *
                        (2.0 * std::abs(1.0 + I * sz1) + std::abs(p.c) * eps);
    }
    case 2: {
      const double a = coupling_scale_a();
      const double B = p.theta0 * (a + p.c * eps) - b2e2;
      const Complex P = a + p.c * eps + B * riemann::g_function(z);
      const Complex Q = p.theta0 + B * riemann::g_function(zm1);
      return std::abs(P) * std::abs(Q) + b2e2;
    }
    default: {
      const Complex sz = z.value == 0.0 ? Complex{} : riemann::sheet_sqrt(z);
      const Complex sz1 = riemann::sheet_sqrt(zm1);
      return std::abs(1.0 - I * p.theta0 / (4.0 * pi) * sz) *
                 std::abs(1.0 + I * (1.0 - p.c * eps / (4.0 * pi)) * sz1) +
             std::pow(p.b * eps / (4.0 * pi), 2) * std::abs(sz1 * sz);
    }
  }
}

double stable_residual(const ModelParams& p, Complex z, int z_sheet, int zm1_sheet) {
  return std::abs(d_epsilon_stable(p, {z, z_sheet}, zm1_sheet));
}

// principal ln(1+w)
Complex clog1p(Complex w) {
  return {0.5 * std::log1p(2.0 * w.real() + std::norm(w)),
          std::atan2(w.imag(), 1.0 + w.real())};
}

// Objective Newton minimizes: D_eps in its cancellation-free regrouping, and
// for d = 2 with theta0 = 0 the exact rescale D/(-b^2 e^2). There D' = O(e^2),
// so the PQ - b^2 e^2 subtraction noise alone would cap the achievable root
// accuracy near 1e-10 relative; after the rescale the leading terms cancel
// symbolically and Newton reaches the usual machine floor. A constant rescale
// leaves the Newton step f/f' unchanged.
struct NewtonEval {
  Complex f, fp;
  double scale;  // magnitude of the additive pieces of f, for floor tests
};

NewtonEval newton_objective(const ModelParams& p, const SheetPoint& z, int zm1_sheet) {
  const double eps = p.epsilon;
  if (p.dim.value() == 2 && p.theta0 == 0.0 && zm1_sheet == 0 && std::abs(z.value) < 0.5 &&
      z.value != 0.0 && p.b != 0.0 && eps > 0.0) {
    const double a = coupling_scale_a();
    const double be2 = p.b * p.b * eps * eps;
    const Complex g = riemann::g_function(z);
    const Complex P = a + p.c * eps - be2 * g;
    const Complex L = clog1p(-z.value);  // ln(1-z), the sheet-0 value of ln(z-1) - i pi
    // D/(-b^2 e^2) = P L/(4 pi) - (c e - b^2 e^2 g)/a
    const Complex t1 = P * L / (4.0 * pi);
    const Complex t2 = (p.c * eps - be2 * g) / a;
    const Complex fp = -be2 * L / (16.0 * pi * pi * z.value) - P / (4.0 * pi * (1.0 - z.value)) +
                       be2 / (4.0 * pi * a * z.value);
    return {t1 - t2, fp, std::abs(t1) + std::abs(t2)};
  }
  return {d_epsilon_stable(p, z, zm1_sheet), d_epsilon_stable_derivative(p, z, zm1_sheet),
          dispersion_scale(p, z, zm1_sheet)};
}

// ---- fixed-point step maps, one per regime ----------------------------------

// cases 1, 2 (d = 1, c < 0):  z' = 1 - [1 - |c| e/2 - e^2/(2(theta0 + 2i sqrt z))]^2
Complex step_d1_cneg(const ModelParams& p, Complex z) {
  const double ac = std::abs(p.c), eps = p.epsilon;
  const Complex t = 1.0 - 0.5 * ac * eps - eps * eps / (2.0 * (p.theta0 + 2.0 * I * sqrt_m1(z)));
  return 1.0 - t * t;
}

// case 4 (d = 1, c = 0, theta0 > 0):
//   z' = e^2/(theta0 + 2i sqrt z) - e^4/(4 (theta0 + 2i sqrt z)^2)
Complex step_d1_czero(const ModelParams& p, Complex z) {
  const double eps = p.epsilon;
  const Complex q = p.theta0 + 2.0 * I * sqrt_m1(z);
  return eps * eps / q - std::pow(eps, 4) / (4.0 * q * q);
}

// case 3 (d = 3, c < 0): solve the left factor of the rearranged equation
Complex step_d3_cneg(const ModelParams& p, Complex z) {
  const double ac = std::abs(p.c), eps = p.epsilon;
  const double beta = 1.0 + ac * eps / (4.0 * pi);
  const double first = (ac * eps / (2.0 * pi) + ac * ac * eps * eps / (16.0 * pi * pi)) / (beta * beta);
  const Complex sz = sqrt_m1(z);
  const Complex sz1 = riemann::sheet_sqrt({z - 1.0, 0});
  const Complex den = 1.0 - I * p.theta0 * sz / (4.0 * pi);
  return first - 2.0 * eps * eps / (16.0 * pi * pi) * sz1 * sz / (beta * beta * den) -
         std::pow(eps, 4) / std::pow(16.0 * pi * pi, 2) * (z - 1.0) * z / (beta * beta * den * den);
}

// case 1 (d = 2, c < 0, theta0 != 0): z' = 1 - e^{r(z)}
Complex step_d2_th1(const ModelParams& p, Complex z) {
  const double ac = std::abs(p.c), eps = p.epsilon;
  const double a = coupling_scale_a();
  const double B = p.theta0 * (a - ac * eps) - eps * eps;
  Complex r = -4.0 * pi * (p.theta0 * ac * eps + eps * eps) / (a * B);
  if (z != 0.0)  // at z = 0 the g term vanishes in the limit |g| -> infinity
    r += 4.0 * pi * eps * eps / (B * (a - ac * eps + B * riemann::g_function({z, -1})));
  return -cexpm1(r);
}

// case 2 (d = 2, c < 0, theta0 = 0): z' = 1 - e^{r(z)}
Complex step_d2_th2(const ModelParams& p, Complex z) {
  const double ac = std::abs(p.c), eps = p.epsilon;
  const double a = coupling_scale_a();
  const Complex u = ac * eps + eps * eps * riemann::g_function({z, -1});
  return -cexpm1(4.0 * pi * u / (a * (u - a)));
}

// case 5 (d = 2, c = 0, theta0 > 0): z' = 1 - e^{r(z)}
Complex step_d2_th5(const ModelParams& p, Complex z) {
  const double eps = p.epsilon;
  const double a = coupling_scale_a();
  Complex r;
  if (z == 0.0) {
    r = -4.0 * pi * eps * eps / (a * (a * p.theta0 - eps * eps));
  } else {
    const Complex g = riemann::g_function({z, -1});
    r = -(4.0 * pi * eps * eps / a) * g / (a + (a * p.theta0 - eps * eps) * g);
  }
  return -cexpm1(r);
}

double real_dispersion_on_negative_axis(const ModelParams& p, double lambda) {
  return d_epsilon(p, {Complex(-lambda, 0.0), 0}, 0).real();
}

}  // namespace

bool Regime::has_resonance() const {
  if (c_sign == CSign::negative) return true;  // cases 1-3
  if (c_sign == CSign::zero && d != 3) return theta0_class == Theta0Class::positive;
  return false;
}

bool Regime::has_near_origin_eigenvalue() const {
  switch (case_id) {
    case 2: return true;
    case 4:
    case 5: return theta0_class != Theta0Class::positive;
    case 7: return true;
    default: return false;
  }
}

bool Regime::has_runaway_eigenvalue() const {
  return d == 2 && theta0_class == Theta0Class::zero;
}

Regime classify_regime(const ModelParams& p) {
  Regime r;
  r.d = p.dim.value();
  r.c_sign = p.c < 0.0 ? CSign::negative : (p.c > 0.0 ? CSign::positive : CSign::zero);
  r.theta0_class = p.theta0 < 0.0 ? Theta0Class::negative
                                  : (p.theta0 > 0.0 ? Theta0Class::positive : Theta0Class::zero);
  if (r.c_sign == CSign::negative) {
    if (r.d == 3)
      r.case_id = 3;
    else
      r.case_id = r.theta0_class == Theta0Class::zero ? 2 : 1;
  } else if (r.c_sign == CSign::zero) {
    r.case_id = r.d == 1 ? 4 : (r.d == 2 ? 5 : 6);
  } else {
    r.case_id = 7;
  }
  return r;
}

const char* to_string(SingularityKind k) {
  switch (k) {
    case SingularityKind::isolated_eigenvalue: return "isolated_eigenvalue";
    case SingularityKind::resonance: return "resonance";
    default: return "zero_energy_resonance";
  }
}

const char* to_string(SolverMethod m) {
  switch (m) {
    case SolverMethod::fixed_point: return "fixed_point";
    case SolverMethod::newton: return "newton";
    case SolverMethod::bisection: return "bisection";
    default: return "limit_detector";
  }
}

std::pair<Singularity, IterationTrace> resonance_fixed_point(const ModelParams& p,
                                                             const Regime& regime,
                                                             double tol, int max_iter) {
  p.validate();
  if (!regime.has_resonance())
    throw UnsupportedRegimeError("resonance_fixed_point: regime has no near-origin resonance");
  if (regime.d == 3 && regime.c_sign != CSign::negative)
    throw UnsupportedRegimeError("resonance_fixed_point: d = 3 resonance requires c < 0");
  if (p.b != 1.0)
    throw UnsupportedRegimeError(
        "resonance_fixed_point: recursions are derived for b = 1 (use newton_oracle for b != 1)");

  Complex (*step)(const ModelParams&, Complex) = nullptr;
  Complex z0(0.0, 0.0);
  const double ac = std::abs(p.c);
  switch (regime.case_id) {
    case 1: step = regime.d == 1 ? step_d1_cneg : step_d2_th1; break;
    case 2:
      if (regime.d == 1) {
        step = step_d1_cneg;
        z0 = ac * p.epsilon;  // w^(0) = 0 in the scaled recursion z = |c| e (1 + w)
      } else {
        step = step_d2_th2;
        z0 = 4.0 * pi * ac * p.epsilon / std::pow(coupling_scale_a(), 2);
      }
      break;
    case 3: step = step_d3_cneg; break;
    case 4: step = step_d1_czero; break;
    case 5: step = step_d2_th5; break;
    default:
      throw UnsupportedRegimeError("resonance_fixed_point: no recursion for this case");
  }

  IterationTrace trace;
  trace.iterates.push_back(z0);
  Complex z = z0;
  double prev_diff = -1.0;
  for (int k = 0; k < max_iter; ++k) {
    const Complex zn = step(p, z);
    trace.iterates.push_back(zn);
    const double diff = std::abs(zn - z);
    if (prev_diff > 0.0) trace.ratios.push_back(diff / prev_diff);
    prev_diff = diff;
    z = zn;
    if (diff <= tol * std::abs(zn)) {
      trace.converged = true;
      trace.final_residual = stable_residual(p, z, -1, 0);
      Singularity s{SingularityKind::resonance, z, -1, SolverMethod::fixed_point,
                    trace.final_residual};
      return {s, trace};
    }
  }
  trace.converged = false;
  trace.final_residual = stable_residual(p, z, -1, 0);
  throw ConvergenceError("resonance_fixed_point: no convergence within max_iter", trace);
}

namespace {
Singularity make_newton_root(Complex z, int z_sheet, double residual) {
  const bool on_negative_axis =
      z_sheet == 0 && z.real() < 0.0 && std::abs(z.imag()) <= 1e-10 * std::abs(z);
  if (on_negative_axis) z = Complex(z.real(), 0.0);  // eigenvalues are real
  return {on_negative_axis ? SingularityKind::isolated_eigenvalue : SingularityKind::resonance,
          z, z_sheet, SolverMethod::newton, residual};
}
}  // namespace

Singularity newton_oracle(const ModelParams& p, Complex seed, int z_sheet, int z_minus_1_sheet,
                          double tol, int max_iter) {
  p.validate();
  Complex z = seed;
  Complex best = z;
  double best_res = std::numeric_limits<double>::infinity();
  int stall = 0;
  double best_scale = 1.0;
  for (int k = 0; k < max_iter; ++k) {
    const SheetPoint zp{z, z_sheet};
    const NewtonEval ev = newton_objective(p, zp, z_minus_1_sheet);
    const double af = std::abs(ev.f);
    if (af < best_res) {
      best = z;
      best_res = af;
      best_scale = ev.scale;
      stall = 0;
    } else if (++stall >= 3 && k >= 4) {
      // stagnation at the rounding floor of the objective
      const double floor = 100.0 * std::numeric_limits<double>::epsilon() * best_scale;
      if (best_res <= floor)
        return make_newton_root(best, z_sheet,
                                stable_residual(p, best, z_sheet, z_minus_1_sheet));
      throw NoConvergenceError("newton_oracle: oscillation without residual decay");
    }
    const Complex fp = ev.fp;
    if (!(std::abs(fp) > 0.0))
      throw IllConditionedError("newton_oracle: derivative vanished");
    const Complex stepc = ev.f / fp;
    if (!std::isfinite(stepc.real()) || !std::isfinite(stepc.imag()) ||
        std::abs(stepc) > 1e3 * (std::abs(seed) + 1.0))
      throw IllConditionedError("newton_oracle: step blew up (derivative near zero)");
    z -= stepc;
    if (std::abs(z) > 4.0)
      throw NoConvergenceError("newton_oracle: iterate left the continuation region");
    if (std::abs(stepc) <= tol * std::abs(z))
      return make_newton_root(z, z_sheet, stable_residual(p, z, z_sheet, z_minus_1_sheet));
  }
  throw NoConvergenceError("newton_oracle: no convergence within max_iter");
}

std::optional<double> log_lambda_asymptote(const ModelParams& p) {
  if (p.dim.value() != 2) return std::nullopt;
  const double a = coupling_scale_a();
  const double B = p.theta0 * (a + p.c * p.epsilon) - p.b * p.b * p.epsilon * p.epsilon;
  if (B == 0.0) return std::nullopt;
  return 4.0 * pi * (1.0 / a - (a + p.c * p.epsilon) / B);
}

Singularity eigenvalue_bisection(const ModelParams& p, double lambda_lo, double lambda_hi,
                                 double tol) {
  p.validate();
  if (!(lambda_lo >= 0.0) || !(lambda_hi > lambda_lo))
    throw BracketError("eigenvalue_bisection: need 0 <= lambda_lo < lambda_hi");
  if (p.dim.value() == 2) {
    if (lambda_lo == 0.0) lambda_lo = std::numeric_limits<double>::min();
    const auto mu_a = log_lambda_asymptote(p);
    if (mu_a && std::log(lambda_lo) < *mu_a && *mu_a < std::log(lambda_hi))
      throw SplitBracketError(
          "eigenvalue_bisection: bracket straddles the vertical asymptote lambda_a; "
          "bisect within the regime-provided sub-brackets",
          *mu_a);
  }
  double flo = real_dispersion_on_negative_axis(p, lambda_lo);
  double fhi = real_dispersion_on_negative_axis(p, lambda_hi);
  if (flo == 0.0)
    return {SingularityKind::isolated_eigenvalue, Complex(-lambda_lo, 0.0), 0,
            SolverMethod::bisection, 0.0};
  if (fhi == 0.0)
    return {SingularityKind::isolated_eigenvalue, Complex(-lambda_hi, 0.0), 0,
            SolverMethod::bisection, 0.0};
  if ((flo > 0.0) == (fhi > 0.0))
    throw BracketError("eigenvalue_bisection: no sign change of D_eps(-lambda) in bracket");
  double lo = lambda_lo, hi = lambda_hi;
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 2000; ++it) {
    mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = real_dispersion_on_negative_axis(p, mid);
    if (fm == 0.0) break;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= tol * mid) break;
  }
  const double residual = std::abs(real_dispersion_on_negative_axis(p, mid));
  return {SingularityKind::isolated_eigenvalue, Complex(-mid, 0.0), 0, SolverMethod::bisection,
          residual};
}

std::pair<double, double> regime_bracket(const ModelParams& p, const Regime& regime) {
  const double eps = p.epsilon;
  const double a = coupling_scale_a();
  double centre = 0.0;
  switch (regime.case_id) {
    case 2:
      if (regime.d == 1) return {0.0, eps * eps / (4.0 * p.c * p.c)};
      {
        const double bound = std::exp(-4.0 * pi * std::abs(p.c) / eps + 4.0 * pi / a);
        if (bound < 1e-290)
          throw UnsupportedRegimeError(
              "regime_bracket: the d = 2 near-threshold eigenvalue lies below the "
              "representable range at this epsilon (|E| < e^{-4 pi |c|/eps})");
        return {bound * 1e-12, bound};
      }
    case 4:
      if (regime.theta0_class == Theta0Class::zero)
        centre = std::pow(eps, 4.0 / 3.0) / std::pow(2.0, 2.0 / 3.0);
      else if (regime.theta0_class == Theta0Class::negative)
        centre = eps * eps / std::abs(p.theta0);
      break;
    case 5:
      if (regime.theta0_class == Theta0Class::zero)
        centre = 2.0 * eps * eps * std::abs(std::log(eps)) / (a * a);
      else if (regime.theta0_class == Theta0Class::negative)
        centre = 4.0 * pi * eps * eps / (a * a * std::abs(p.theta0));
      break;
    case 7:
      centre = regime.d == 1 ? p.c * eps
                             : (regime.d == 2 ? 4.0 * pi * p.c * eps / (a * a)
                                              : p.c * eps / (2.0 * pi));
      break;
    default:
      break;
  }
  if (centre <= 0.0)
    throw UnsupportedRegimeError("regime_bracket: regime has no near-origin eigenvalue");
  // geometric expansion fallback around the case's leading-order location
  double lo = centre / 2.0, hi = centre * 2.0;
  for (int attempt = 0; attempt < 40; ++attempt) {
    const double flo = real_dispersion_on_negative_axis(p, lo);
    const double fhi = real_dispersion_on_negative_axis(p, hi);
    if ((flo > 0.0) != (fhi > 0.0)) return {lo, hi};
    lo /= 2.0;
    hi *= 2.0;
  }
  throw BracketError("regime_bracket: no sign change found near the predicted eigenvalue");
}

DeepEigenvalue deep_eigenvalue_search(const ModelParams& p) {
  p.validate();
  if (p.dim.value() != 2 || p.theta0 != 0.0)
    throw UnsupportedRegimeError("deep_eigenvalue_search: runaway eigenvalue needs d = 2, theta0 = 0");
  const double eps = p.epsilon;
  const double a = coupling_scale_a();
  const double be2 = p.b * p.b * eps * eps;
  // theta0 = 0: B = -b^2 e^2, asymptote mu_a = 4 pi (1/a + (a + c e)/(b^2 e^2))
  const double mu_a = 4.0 * pi * (1.0 / a + (a + p.c * eps) / be2);
  const auto dtilde = [&](double mu) {
    const double P = a + p.c * eps - be2 * (mu / (4.0 * pi) - 1.0 / a);
    const double lg1p = mu + std::log1p(std::exp(-mu));  // ln(1 + e^mu)
    const double Q = -be2 * (lg1p / (4.0 * pi) - 1.0 / a);
    return P * Q - be2;
  };
  double lo = mu_a * (1.0 + 1e-12);
  double hi = mu_a + 16.0 * pi / (a + p.c * eps);
  double flo = dtilde(lo);
  for (int it = 0; it < 60 && (flo > 0.0) == (dtilde(hi) > 0.0); ++it) hi += hi - mu_a;
  if ((flo > 0.0) == (dtilde(hi) > 0.0))
    throw BracketError("deep_eigenvalue_search: no sign change beyond the asymptote");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if ((dtilde(mid) > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = dtilde(mid);
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * mid) break;
  }
  DeepEigenvalue out{0.5 * (lo + hi), mu_a, std::nullopt};
  if (out.log_lambda < 700.0) {
    const double lambda = std::exp(out.log_lambda);
    out.singularity = Singularity{SingularityKind::isolated_eigenvalue, Complex(-lambda, 0.0), 0,
                                  SolverMethod::bisection,
                                  std::abs(real_dispersion_on_negative_axis(p, lambda))};
  }
  return out;
}

ZeroResonanceResult zero_resonance_detector(const ModelParams& p) {
  p.validate();
  if (p.dim.value() != 3)
    throw std::invalid_argument("zero_resonance_detector: defined for d = 3");
  // samples of D(z)/sqrt(z) along arg z = pi at |z| = 10^-4 .. 10^-8
  std::vector<Complex> v;
  std::vector<double> h;  // sqrt(|z|)
  for (int j = 4; j <= 8; ++j) {
    const double t = std::pow(10.0, -j);
    const SheetPoint z{Complex(-t, 0.0), 0};
    v.push_back(d_epsilon_stable(p, z, 0) / riemann::sheet_sqrt(z));
    h.push_back(std::sqrt(t));
  }
  const int n = static_cast<int>(v.size());
  // a 1/sqrt(z) pole makes |v| grow straight down the ladder (h shrinks 100x)
  if (std::abs(v.back()) > 2.0 * std::abs(v.front()))
    return {false, Complex{}, ZeroResonanceResult::Limit::diverging};
  // order-2 Richardson in h (ratio sqrt(10) per step): kills the O(h) and
  // O(h^2) corrections of D/sqrt(z) = coeff + C1 h + C2 h^2 + ...
  const double r1 = std::sqrt(10.0);
  std::vector<Complex> l1;
  for (int i = 0; i + 1 < n; ++i) l1.push_back((r1 * v[i + 1] - v[i]) / (r1 - 1.0));
  std::vector<Complex> l2;
  for (int i = 0; i + 1 < static_cast<int>(l1.size()); ++i)
    l2.push_back((10.0 * l1[i + 1] - l1[i]) / 9.0);
  const Complex limit = l2.back();
  // a vanishing limit means the singularity is a plain threshold eigenvalue
  if (std::abs(limit) < 1e-3 * std::abs(v.back()))
    return {false, limit, ZeroResonanceResult::Limit::vanishing};
  return {true, limit, ZeroResonanceResult::Limit::finite};
}

TwoChannelState resonant_state(const ModelParams& p) {
  const double eps = p.epsilon;
  return {[eps](double x) { return -eps / (4.0 * pi * x); },
          [](double x) { return std::exp(-x) / x; }};
}

bool verify_resonant_state(const ModelParams& p) { return verify_resonant_state(p, resonant_state(p)); }

bool verify_resonant_state(const ModelParams& p, const TwoChannelState& state) {
  p.validate();
  if (p.dim.value() != 3 || p.c != 0.0)
    throw std::invalid_argument("verify_resonant_state: defined for d = 3, c = 0");
  // charges from the singular part, regular parts from what remains:
  //   q_j = lim 4 pi x psi_j(x),  f_j = lim [psi_j(x) - q_j/(4 pi x)]
  // extracted by quadratic extrapolation on a three-point x ladder.
  const double xs[3] = {1e-3, 5e-4, 2.5e-4};
  auto extract = [&](const std::function<double(double)>& psi, double& q, double& f) {
    double qs[3];
    for (int i = 0; i < 3; ++i) qs[i] = 4.0 * pi * xs[i] * psi(xs[i]);
    // quadratic extrapolation to x = 0 on a geometric ladder x, x/2, x/4
    q = (8.0 * qs[2] - 6.0 * qs[1] + qs[0]) / 3.0;
    double fs[3];
    for (int i = 0; i < 3; ++i) fs[i] = psi(xs[i]) - q / (4.0 * pi * xs[i]);
    f = (8.0 * fs[2] - 6.0 * fs[1] + fs[0]) / 3.0;
  };
  double q0, f0, q1, f1;
  extract(state.channel0, q0, f0);
  extract(state.channel1, q1, f1);
  const double tol = 1e-6;
  const double s0 = 1.0 + std::abs(q0);
  const double s1 = 1.0 + std::abs(q1);
  const bool coupling0 = std::abs(q0 - (p.theta0 * f0 + p.b * p.epsilon * f1)) <= tol * s0;
  const bool coupling1 = std::abs(q1 - (p.b * p.epsilon * f0 + p.theta1_eps() * f1)) <= tol * s1;
  return coupling0 && coupling1;
}

std::optional<EigenvalueWindow> eigenvalue_free_window(const ModelParams& p,
                                                       const Regime& regime) {
  const bool claims_empty_window =
      (regime.case_id == 1 || regime.case_id == 3) ||
      ((regime.case_id == 4 || regime.case_id == 5) &&
       regime.theta0_class == Theta0Class::positive);
  if (!claims_empty_window) return std::nullopt;
  double bound = p.theta0 != 0.0 ? p.theta0 * p.theta0 / 4.0 : 0.5;
  if (p.dim.value() == 2) {
    if (const auto mu_a = log_lambda_asymptote(p); mu_a && *mu_a < 700.0)
      bound = std::min(bound, std::exp(*mu_a));
    bound /= 2.0;
  }
  if (p.dim.value() == 3 && p.theta0 < 0.0)  // stay below the lower-channel eigenvalue
    bound = std::min(bound, 0.5 * std::pow(4.0 * pi / p.theta0, 2));
  EigenvalueWindow w{bound, true};
  double prev = real_dispersion_on_negative_axis(p, bound * 1e-9);
  for (int i = 1; i <= 2000; ++i) {
    const double lam = bound * std::pow(1e9, i / 2000.0 - 1.0);
    const double cur = real_dispersion_on_negative_axis(p, lam);
    if (cur == 0.0 || (cur > 0.0) != (prev > 0.0)) {
      w.clear = false;
      break;
    }
    prev = cur;
  }
  return w;
}

std::vector<Singularity> root_cluster(const ModelParams& p, double radius) {
  p.validate();
  if (p.dim.value() != 1 || p.theta0 != 0.0 || p.c != 0.0)
    throw std::invalid_argument("root_cluster: defined for d = 1, theta0 = 0, c = 0");
  // Leading-order roots of 4 i sqrt(z)(1 + i sqrt(z-1)) = eps^2: z^{3/2} = -i eps^2/2,
  // giving args pi (sheet 0) and -pi/3, -5 pi/3 (sheet -1) at |z| = eps^{4/3}/2^{2/3}.
  const double mod = std::pow(p.epsilon * p.epsilon / 2.0, 2.0 / 3.0);
  struct Seed {
    double arg;
    int sheet;
    SingularityKind kind;
  };
  const Seed seeds[3] = {{pi, 0, SingularityKind::isolated_eigenvalue},
                         {-pi / 3.0, -1, SingularityKind::resonance},
                         {-5.0 * pi / 3.0, -1, SingularityKind::resonance}};
  std::vector<Singularity> found;
  std::vector<std::string> failures;
  for (const auto& s : seeds) {
    const Complex seed = mod * std::exp(I * s.arg);
    try {
      Singularity root = newton_oracle(p, seed, s.sheet, 0);
      root.kind = s.kind;
      if (std::abs(root.location) > radius) {
        failures.push_back("root escaped the prescribed radius");
        continue;
      }
      found.push_back(root);
    } catch (const std::runtime_error& e) {
      failures.push_back(e.what());
    }
  }
  if (found.size() != 3)
    throw IncompleteClusterError("root_cluster: missing roots (" + std::to_string(found.size()) +
                                     " of 3 found)",
                                 found);
  return found;
}

}  // namespace resonance::rootfinder
