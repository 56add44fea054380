#pragma once

// Closed-form evaluators for the leading-order expansions of the singularity
// coordinates, plus a log-log order fitter that confronts them with solver
// output over an epsilon ladder.

#include <map>

#include "resonance/rootfinder.hpp"

namespace resonance::asymptotics {

using dispersion::ModelParams;
using riemann::Complex;
using rootfinder::Regime;

/// coefficient * eps^power * |ln eps|^log_power
struct Term {
  Complex coefficient;
  double power;
  int log_power = 0;
};

struct ExpansionResult {
  std::vector<Term> terms;       // ordered by decreasing magnitude as eps -> 0
  double remainder_power = 0.0;  // eps-power of the first omitted order
  int remainder_log_power = 0;
  bool remainder_has_log = false;

  Complex evaluate(double eps) const;
  /// lexicographic (power, -log_power) strictly increasing across terms and
  /// into the remainder
  bool well_ordered() const;
};

/// The regime's tabulated leading-order expansion (signs, powers and log
/// factors exactly as printed). Throws UnsupportedRegimeError for regimes
/// without one (the d = 3, c = 0 zero-energy resonance).
ExpansionResult leading_order(const ModelParams& p, const Regime& regime);

enum class Component { full, real_part, imag_part };

struct OrderFit {
  std::vector<double> epsilons;   // strictly decreasing ladder
  std::vector<double> residuals;  // |numeric - expansion|, log factors divided out
  double fitted_slope = 0.0;
  double r_squared = 0.0;
  bool precision_floor_warning = false;
  std::vector<std::size_t> excluded_points;  // indices dropped at the floor
};

/// Least-squares slope of log|numeric - expansion| against log(eps). When the
/// remainder carries a log factor it is divided out first, so the slope
/// estimates the plain eps-power. Points whose residual sits below 100x the
/// machine epsilon of the numeric value are excluded with a warning.
/// Requires at least 4 ladder points spanning at least 2 decades.
OrderFit fit_remainder_order(const std::map<double, Complex>& numeric,
                             const ExpansionResult& expansion,
                             Component component = Component::full);

}  // namespace resonance::asymptotics
