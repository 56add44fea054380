#include "resonance/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace resonance::asymptotics {

namespace {
using riemann::coupling_scale_a;
using riemann::pi;
using rootfinder::CSign;
using rootfinder::Theta0Class;
using rootfinder::UnsupportedRegimeError;

const Complex I(0.0, 1.0);
}  // namespace

Complex ExpansionResult::evaluate(double eps) const {
  const double L = std::abs(std::log(eps));
  Complex v{};
  for (const auto& t : terms) v += t.coefficient * std::pow(eps, t.power) * std::pow(L, t.log_power);
  return v;
}

bool ExpansionResult::well_ordered() const {
  // Terms in strictly decreasing magnitude as eps -> 0. A remainder may sit
  // between listed terms when they mix real and imaginary orders (the d = 2
  // resonance expansions state Re and Im at different orders), but it must
  // decay strictly faster than the leading term.
  auto key = [](double power, int logp) { return std::pair<double, int>(power, -logp); };
  for (std::size_t i = 0; i + 1 < terms.size(); ++i)
    if (!(key(terms[i].power, terms[i].log_power) <
          key(terms[i + 1].power, terms[i + 1].log_power)))
      return false;
  if (!terms.empty() &&
      !(key(terms.front().power, terms.front().log_power) <
        key(remainder_power, remainder_log_power)))
    return false;
  return true;
}

ExpansionResult leading_order(const ModelParams& p, const Regime& regime) {
  const double a = coupling_scale_a();
  const double ac = std::abs(p.c);
  const double th0 = p.theta0;
  ExpansionResult e;
  switch (regime.case_id) {
    case 1:
      if (regime.d == 1) {
        e.terms = {{ac, 1.0},
                   {1.0 / th0 - p.c * p.c / 4.0, 2.0},
                   {-2.0 * I * std::sqrt(ac) / (th0 * th0), 2.5}};
        e.remainder_power = 4.0;
      } else {
        e.terms = {{4.0 * pi * ac / (a * a), 1.0},
                   {-16.0 * std::pow(pi, 3) / std::pow(a * th0, 2) * I, 2.0, -2}};
        e.remainder_power = 2.0;
      }
      break;
    case 2:
      if (regime.d == 1) {
        e.terms = {{ac, 1.0},
                   {-I / (2.0 * std::sqrt(ac)), 1.5},
                   {ac * ac / 4.0, 2.0}};
        e.remainder_power = 3.0;
      } else {
        e.terms = {{4.0 * pi * ac / (a * a), 1.0}, {-pi / (a * a) * I, 2.0}};
        e.remainder_power = 2.0;
        e.remainder_log_power = 1;
        e.remainder_has_log = true;
      }
      break;
    case 3:
      e.terms = {{ac / (2.0 * pi), 1.0},
                 {-3.0 * ac * ac / (16.0 * pi * pi), 2.0},
                 {-I / (8.0 * pi * pi) * std::sqrt(ac / (2.0 * pi)), 2.5}};
      e.remainder_power = 3.0;
      break;
    case 4:
      if (regime.theta0_class == Theta0Class::positive) {
        e.terms = {{1.0 / th0, 2.0}, {-2.0 * I / std::pow(th0, 2.5), 3.0}};
        e.remainder_power = 4.0;
      } else if (regime.theta0_class == Theta0Class::zero) {
        e.terms = {{-1.0 / std::pow(2.0, 2.0 / 3.0), 4.0 / 3.0}};
        e.remainder_power = 8.0 / 3.0;
      } else {
        e.terms = {{-1.0 / std::abs(th0), 2.0}};
        e.remainder_power = 3.0;
      }
      break;
    case 5:
      if (regime.theta0_class == Theta0Class::positive) {
        e.terms = {{4.0 * pi / (a * a * th0), 2.0},
                   {-4.0 * std::pow(pi, 3) / (a * a * th0 * th0) * I, 2.0, -2}};
        e.remainder_power = 2.0;
        e.remainder_log_power = -1;
        e.remainder_has_log = true;
      } else if (regime.theta0_class == Theta0Class::zero) {
        e.terms = {{-2.0 / (a * a), 2.0, 1}};
        e.remainder_power = 2.0;
        e.remainder_log_power = -1;
        e.remainder_has_log = true;
      } else {
        e.terms = {{-4.0 * pi / (a * a * std::abs(th0)), 2.0}};
        e.remainder_power = 2.0;
        e.remainder_log_power = -1;
        e.remainder_has_log = true;
      }
      break;
    case 7:
      if (regime.d == 1) {
        e.terms = {{-p.c, 1.0}};
        e.remainder_power = regime.theta0_class == Theta0Class::zero ? 1.5 : 2.0;
      } else if (regime.d == 2) {
        e.terms = {{-4.0 * pi * p.c / (a * a), 1.0}};
        e.remainder_power = 2.0;
        if (regime.theta0_class == Theta0Class::zero) {
          e.remainder_log_power = 1;
          e.remainder_has_log = true;
        }
      } else {
        e.terms = {{-p.c / (2.0 * pi), 1.0}};
        e.remainder_power = 2.0;
      }
      break;
    default:
      throw UnsupportedRegimeError(
          "leading_order: no coordinate expansion for this regime (zero-energy resonance)");
  }
  return e;
}

OrderFit fit_remainder_order(const std::map<double, Complex>& numeric,
                             const ExpansionResult& expansion, Component component) {
  if (numeric.size() < 4)
    throw std::invalid_argument("fit_remainder_order: need at least 4 ladder points");
  {
    const double lo = numeric.begin()->first;
    const double hi = numeric.rbegin()->first;
    if (std::log10(hi / lo) < 2.0 - 1e-9)
      throw std::invalid_argument("fit_remainder_order: ladder must span at least 2 decades");
  }
  OrderFit fit;
  for (auto it = numeric.rbegin(); it != numeric.rend(); ++it) {  // decreasing eps
    const double eps = it->first;
    const Complex num = it->second;
    const Complex exp_val = expansion.evaluate(eps);
    double resid;
    switch (component) {
      case Component::real_part: resid = std::abs(num.real() - exp_val.real()); break;
      case Component::imag_part: resid = std::abs(num.imag() - exp_val.imag()); break;
      default: resid = std::abs(num - exp_val);
    }
    const double floor = 100.0 * std::numeric_limits<double>::epsilon() * std::abs(num);
    fit.epsilons.push_back(eps);
    if (resid < floor) {
      fit.precision_floor_warning = true;
      fit.excluded_points.push_back(fit.epsilons.size() - 1);
      fit.residuals.push_back(resid);
      continue;
    }
    if (expansion.remainder_has_log)
      resid /= std::pow(std::abs(std::log(eps)), expansion.remainder_log_power);
    fit.residuals.push_back(resid);
  }
  // least squares on the retained points
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int n = 0;
  for (std::size_t i = 0; i < fit.epsilons.size(); ++i) {
    if (std::find(fit.excluded_points.begin(), fit.excluded_points.end(), i) !=
        fit.excluded_points.end())
      continue;
    const double x = std::log(fit.epsilons[i]);
    const double y = std::log(std::max(fit.residuals[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++n;
  }
  if (n >= 2) {
    const double den = n * sxx - sx * sx;
    fit.fitted_slope = (n * sxy - sx * sy) / den;
    const double ss_tot = syy - sy * sy / n;
    const double ss_res = ss_tot - fit.fitted_slope * (sxy - sx * sy / n);
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  }
  return fit;
}

}  // namespace resonance::asymptotics
