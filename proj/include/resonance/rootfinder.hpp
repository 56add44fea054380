#pragma once

// Locators for the spectral singularities near the origin: the per-regime
// fixed-point recursions (primary), an independent Newton oracle on the
// analytically continued dispersion function, real-axis bisection for
// isolated eigenvalues, the zero-energy-resonance limit detector, and the
// d = 1 three-root cluster.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "resonance/dispersion.hpp"

namespace resonance::rootfinder {

using dispersion::ModelParams;
using riemann::Complex;
using riemann::SheetPoint;

enum class CSign { negative, zero, positive };
enum class Theta0Class { negative, zero, positive };

/// One cell of the parameter-space case analysis; uniquely selects one solver case.
struct Regime {
  int d = 1;
  CSign c_sign = CSign::zero;
  Theta0Class theta0_class = Theta0Class::zero;
  int case_id = 0;  // 1..7, the model's case analysis

  bool has_resonance() const;          // a pole off the axis exists near the origin
  bool has_near_origin_eigenvalue() const;
  bool has_runaway_eigenvalue() const; // d = 2, theta0 = 0 escape to -infinity
};

Regime classify_regime(const ModelParams& p);

enum class SingularityKind { isolated_eigenvalue, resonance, zero_energy_resonance };
enum class SolverMethod { fixed_point, newton, bisection, limit_detector };

const char* to_string(SingularityKind k);
const char* to_string(SolverMethod m);

struct Singularity {
  SingularityKind kind;
  Complex location;
  int sheet;  // 0 or -1
  SolverMethod method;
  double residual;  // |D_eps| at the location
};

struct IterationTrace {
  std::vector<Complex> iterates;  // z^(0), z^(1), ...
  std::vector<double> ratios;     // |z^(k+1)-z^(k)| / |z^(k)-z^(k-1)|
  bool converged = false;
  double final_residual = 0.0;
};

struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, IterationTrace t)
      : std::runtime_error(what), trace(std::move(t)) {}
  IterationTrace trace;
};
struct UnsupportedRegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IllConditionedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// The bracket straddles the d = 2 vertical asymptote lambda_{a,eps}; callers
/// must bisect within one of the regime-provided sub-brackets instead.
struct SplitBracketError : std::runtime_error {
  SplitBracketError(const std::string& what, double log_asym)
      : std::runtime_error(what), log_lambda_asymptote(log_asym) {}
  double log_lambda_asymptote;
};
struct IncompleteClusterError : std::runtime_error {
  IncompleteClusterError(const std::string& what, std::vector<Singularity> f)
      : std::runtime_error(what), found(std::move(f)) {}
  std::vector<Singularity> found;
};
/// Convergent fixed-point recursion of the regime's case. The z-branch is
/// continued to sheet -1, the (z-1)-branch stays on sheet 0. `tol` is the
/// relative step tolerance |z^(k+1) - z^(k)| <= tol |z^(k+1)|.
std::pair<Singularity, IterationTrace> resonance_fixed_point(const ModelParams& p,
                                                             const Regime& regime,
                                                             double tol = 1e-12,
                                                             int max_iter = 200);

/// Independent Newton verification of a D_eps zero, with the closed-form
/// derivative on fixed sheets. Near the origin it evaluates the
/// cancellation-free regrouping of D_eps (see d_epsilon_stable).
Singularity newton_oracle(const ModelParams& p, Complex seed, int z_sheet, int z_minus_1_sheet,
                          double tol = 1e-12, int max_iter = 100);

/// Bisection on the real function D_eps(-lambda) over (lambda_lo, lambda_hi).
/// Requires a sign change; for d = 2 throws SplitBracketError when the
/// bracket contains the vertical asymptote of the rearranged equation.
Singularity eigenvalue_bisection(const ModelParams& p, double lambda_lo, double lambda_hi,
                                 double tol = 1e-14);

/// Default near-origin bisection bracket from the per-case interval
/// analysis, with a geometric expansion fallback for exploratory use.
std::pair<double, double> regime_bracket(const ModelParams& p, const Regime& regime);

struct DeepEigenvalue {
  double log_lambda;            // mu = ln(lambda) of the runaway root
  double log_lambda_asymptote;  // mu_a = ln(lambda_{a,eps})
  std::optional<Singularity> singularity;  // present when e^mu is representable
};

/// The d = 2, theta0 = 0 eigenvalue in (lambda_{a,eps}, infinity), solved in
/// log coordinates (lambda_{a,eps} overflows double for all small eps).
DeepEigenvalue deep_eigenvalue_search(const ModelParams& p);

struct ZeroResonanceResult {
  bool present;
  Complex coefficient;  // lim D_eps(z)/sqrt(z) along arg z = pi
  enum class Limit { finite, vanishing, diverging } limit;
};

/// Richardson-extrapolated limit of D_eps(z)/sqrt(z) as z -> 0 along the
/// negative real axis (d = 3). A finite nonzero limit flags the zero-energy
/// resonance; the limit is i eps^2/(16 pi^2) when c = 0.
ZeroResonanceResult zero_resonance_detector(const ModelParams& p);

/// Radial profiles of a two-channel state, channel j as a function of |x|.
struct TwoChannelState {
  std::function<double(double)> channel0;
  std::function<double(double)> channel1;
};

/// The zero-energy resonant state (-eps/(4 pi |x|), e^{-|x|}/|x|), N = 1.
TwoChannelState resonant_state(const ModelParams& p);

/// Checks the charge/regular-part relations q0 = theta0 f0 + b eps f1 and
/// q1 = b eps f0 + theta1 f1 for a d = 3, c = 0 candidate state, extracting
/// q_j and f_j numerically from the small-|x| behaviour.
bool verify_resonant_state(const ModelParams& p);
bool verify_resonant_state(const ModelParams& p, const TwoChannelState& state);

/// The three roots of the d = 1, theta0 = 0, c = 0 dispersion relation near
/// the origin: the eigenvalue at arg pi (sheet 0) and the conjugate pair at
/// args -pi/3, -5 pi/3 (sheet -1), each of modulus ~ eps^{4/3}/2^{2/3}.
std::vector<Singularity> root_cluster(const ModelParams& p, double radius);

/// d = 2 vertical asymptote ln(lambda_{a,eps}) of the rearranged real-axis
/// equation (the zero of a + c eps + B g(-lambda)).
std::optional<double> log_lambda_asymptote(const ModelParams& p);

/// Empirical check of the "no isolated eigenvalues in (-C, 0)" statements:
/// a sign scan of D_eps(-lambda) over a log grid in (0, C), with C from the
/// case analysis (min(theta0^2/4, lambda_{a,eps})/2 and variants). Returns
/// the window bound C and whether the window is clear. Only meaningful for
/// regimes where the window is asserted to be empty.
struct EigenvalueWindow {
  double bound;
  bool clear;
};
std::optional<EigenvalueWindow> eigenvalue_free_window(const ModelParams& p,
                                                       const Regime& regime);

}  // namespace resonance::rootfinder
