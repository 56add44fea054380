#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "resonance/rootfinder.hpp"

using namespace resonance;
using namespace resonance::rootfinder;
using doctest::Approx;
using riemann::Dimension;
using riemann::pi;

namespace {
ModelParams make(int d, double th0, double c, double eps, double b = 1.0) {
  return ModelParams{Dimension(d), th0, c, b, eps};
}

double rel(Complex got, Complex want) { return std::abs(got - want) / std::abs(want); }

double slope_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(xs.size());
  for (int i = 0; i < n; ++i) {
    const double x = std::log(xs[i]), y = std::log(ys[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}
}  // namespace

TEST_CASE("regime classification covers the case table") {
  CHECK(classify_regime(make(1, 1.0, -1.0, 0.01)).case_id == 1);
  CHECK(classify_regime(make(2, -1.0, -1.0, 0.01)).case_id == 1);
  CHECK(classify_regime(make(1, 0.0, -1.0, 0.01)).case_id == 2);
  CHECK(classify_regime(make(3, 0.5, -1.0, 0.01)).case_id == 3);
  CHECK(classify_regime(make(1, 0.0, 0.0, 0.01)).case_id == 4);
  CHECK(classify_regime(make(2, 0.0, 0.0, 0.01)).case_id == 5);
  CHECK(classify_regime(make(3, 0.5, 0.0, 0.01)).case_id == 6);
  CHECK(classify_regime(make(2, 0.5, 1.0, 0.01)).case_id == 7);
  CHECK(classify_regime(make(2, 0.0, 0.0, 0.01)).has_runaway_eigenvalue());
  CHECK_FALSE(classify_regime(make(2, 1.0, 0.0, 0.01)).has_runaway_eigenvalue());
}

TEST_CASE("fixed point reproduces independently computed resonances") {
  struct Case {
    int d;
    double th0, c, eps;
    Complex root;
  };
  // reference roots from 50-digit muller iteration on D_eps
  const Case cases[] = {
      {1, 1.0, -1.0, 1e-2, {0.0100706280051881849, -1.91888797134334893e-5}},
      {1, 0.0, -1.0, 1e-2, {0.00998743811998365657, -4.97347574894797874e-4}},
      {3, 1.0, -2.0 * pi, 1e-2, {0.00992549787830803531, -1.24297095089389034e-7}},
      {1, 1.0, 0.0, 1e-1, {0.00944853352186094039, -0.00180718095002904455}},
      {2, 1.0, -1.0, 1e-3, {4.28261354744001712e-6, -1.70901297631259116e-8}},
      {2, 0.0, -1.0, 1e-3, {4.2739037270202532e-6, -1.06965053939235247e-9}},
      {2, 5.0, 0.0, 1e-3, {9.68717927100126312e-10, -1.93549884127399715e-11}},
  };
  for (const auto& tc : cases) {
    const ModelParams p = make(tc.d, tc.th0, tc.c, tc.eps);
    const auto [res, trace] = resonance_fixed_point(p, classify_regime(p));
    CAPTURE(tc.d);
    CAPTURE(tc.th0);
    CHECK(rel(res.location, tc.root) < 1e-11);
    CHECK(res.location.imag() < 0.0);
    CHECK(res.sheet == -1);
    CHECK(trace.converged);
  }
}

TEST_CASE("unsupported regimes are rejected") {
  const ModelParams p = make(1, -1.0, 0.0, 0.01);  // c = 0, theta0 < 0: eigenvalue only
  CHECK_THROWS_AS(resonance_fixed_point(p, classify_regime(p)), UnsupportedRegimeError);
  const ModelParams q = make(3, 0.5, 0.0, 0.01);  // zero-energy resonance regime
  CHECK_THROWS_AS(resonance_fixed_point(q, classify_regime(q)), UnsupportedRegimeError);
}

TEST_CASE("oracle equivalence: fixed point vs Newton across regimes and ladder") {
  struct Cell {
    int d;
    double th0, c;
  };
  const Cell cells[] = {{1, 1.0, -1.0}, {1, 0.0, -1.0},  {3, 0.0, -2.0 * pi},
                        {3, -1.0, -2.0 * pi}, {1, 1.0, 0.0}, {2, 1.0, -1.0},
                        {2, 0.0, -1.0}, {2, 5.0, 0.0}};
  for (const auto& cell : cells) {
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const ModelParams p = make(cell.d, cell.th0, cell.c, eps);
      const auto [res, trace] = resonance_fixed_point(p, classify_regime(p));
      const auto oracle = newton_oracle(p, res.location * (1.0 + 1e-4), -1, 0);
      CAPTURE(cell.d);
      CAPTURE(cell.th0);
      CAPTURE(eps);
      CHECK(rel(oracle.location, res.location) < 1e-10);
    }
  }
  // seeded exactly at the fixed-point result, Newton stays within 1e-12
  const ModelParams p = make(1, 1.0, -1.0, 1e-2);
  const auto [res, trace] = resonance_fixed_point(p, classify_regime(p));
  CHECK(rel(newton_oracle(p, res.location, -1, 0).location, res.location) < 1e-12);
  // the recursions are derived for b = 1
  CHECK_THROWS_AS(resonance_fixed_point(make(1, 1.0, -1.0, 1e-2, 2.0), classify_regime(p)),
                  UnsupportedRegimeError);
}

TEST_CASE("newton: far seed error path, decoupled eigenvalue as exact target") {
  // far from any zero: either no convergence or a genuine zero with a clean residual
  const ModelParams p = make(1, 0.8, -0.6, 0.01);
  try {
    const auto s = newton_oracle(p, Complex(0.5, 0.5), 0, 0);
    CHECK(s.residual <= 1e-8);
  } catch (const NoConvergenceError&) {
  } catch (const IllConditionedError&) {
  }

  // b = 0, d = 1, c > 0: Newton lands exactly on the decoupled closed form
  const ModelParams pdec = make(1, 0.3, 0.7, 0.05, 0.0);
  const double want = dispersion::decoupled_eigenvalue(pdec);
  const auto s = newton_oracle(pdec, Complex(want * 1.001, 0.0), 0, 0);
  CHECK(rel(s.location, Complex(want, 0.0)) < 1e-12);
  CHECK(s.kind == SingularityKind::isolated_eigenvalue);
}

TEST_CASE("contraction and ball confinement of the case-1 d=1 recursion") {
  for (double eps : {1e-2, 1e-3}) {
    const ModelParams p = make(1, 1.0, -1.0, eps);
    const auto [res, trace] = resonance_fixed_point(p, classify_regime(p));
    // |z^(k+1)-z^(k)| <= K eps^{3/2} |z^(k)-z^(k-1)| from the second step on
    for (std::size_t k = 1; k < trace.ratios.size(); ++k)
      CHECK(trace.ratios[k] <= 2.0 * std::pow(eps, 1.5));
    // all iterates inside a ball of radius C eps, C independent of eps
    for (const auto& z : trace.iterates) CHECK(std::abs(z) <= 2.0 * std::abs(p.c) * eps);
  }
}

TEST_CASE("eigenvalue bisection: near-threshold eigenvalue bounds (case 2)") {
  // d=1: eigenvalue in (-eps^2/4, 0), frozen reference at eps = 1e-3
  {
    const ModelParams p = make(1, 0.0, -1.0, 1e-3);
    const auto [lo, hi] = regime_bracket(p, classify_regime(p));
    const auto s = eigenvalue_bisection(p, lo, hi);
    CHECK(s.location.real() > -p.epsilon * p.epsilon / 4.0);
    CHECK(s.location.real() < 0.0);
    CHECK(rel(s.location, Complex(-2.49875109265746924e-7, 0.0)) < 1e-12);
    CHECK(s.kind == SingularityKind::isolated_eigenvalue);
  }
  // the bound holds across a ladder
  for (double eps : {0.5, 0.1, 1e-2, 1e-3, 1e-4}) {
    const ModelParams p = make(1, 0.0, -1.0, eps);
    const auto [lo, hi] = regime_bracket(p, classify_regime(p));
    const auto s = eigenvalue_bisection(p, lo, hi);
    CHECK(s.location.real() > -eps * eps / 4.0);
    CHECK(s.location.real() < 0.0);
  }
  // d=2: eigenvalue in (-exp(-4 pi |c|/eps + 4 pi/a), 0). The root sits below
  // the bound by a relative margin ~1e-50, far under double resolution, so
  // the comparison gets one ulp of slack.
  for (double eps : {0.5, 0.3, 0.1}) {
    const ModelParams p = make(2, 0.0, -1.0, eps);
    const double bound = std::exp(-4.0 * pi / eps + 4.0 * pi / riemann::coupling_scale_a());
    const auto [lo, hi] = regime_bracket(p, classify_regime(p));
    const auto s = eigenvalue_bisection(p, lo, hi);
    CHECK(s.location.real() > -bound * (1.0 + 1e-12));
    CHECK(s.location.real() < 0.0);
  }
}

TEST_CASE("eigenvalue bisection: case 4 theta0 = 0 and bracket errors") {
  // the 1 - sqrt(1+lambda) cancellation inside D leaves ~2e-12 relative noise
  const ModelParams p = make(1, 0.0, 0.0, 1e-3);
  const auto s = eigenvalue_bisection(p, 0.5 * 6.3e-5, 2.0 * 6.3e-5);
  CHECK(rel(s.location, Complex(-6.29967139066403967e-5, 0.0)) < 1e-10);

  // no sign change
  CHECK_THROWS_AS(eigenvalue_bisection(p, 1.0, 2.0), BracketError);
  // d=2 bracket straddling the vertical asymptote
  const ModelParams p2 = make(2, 1.5, -1.0, 0.1);
  const double mu_a = *log_lambda_asymptote(p2);
  CHECK_THROWS_AS(eigenvalue_bisection(p2, std::exp(mu_a) / 10.0, std::exp(mu_a) * 10.0),
                  SplitBracketError);
}

TEST_CASE("case 7 eigenvalues approach their leading coefficients") {
  const double a = riemann::coupling_scale_a();
  const double lead[] = {0.0, 1.0, 4.0 * pi / (a * a), 1.0 / (2.0 * pi)};
  for (int d : {1, 2, 3}) {
    for (double eps : {1e-3, 1e-4}) {
      const ModelParams p = make(d, 0.4, 1.0, eps);
      const auto [lo, hi] = regime_bracket(p, classify_regime(p));
      const auto s = eigenvalue_bisection(p, lo, hi);
      CAPTURE(d);
      CAPTURE(eps);
      const double want = lead[d] * p.c * eps;
      // d=2 carries an eps ln(eps)-size relative correction
      CHECK(std::abs(s.location.real() + want) < (d == 2 ? 30.0 * eps : 0.2) * want);
    }
  }
}

TEST_CASE("deep d=2 eigenvalue: beyond the asymptote, monotone escape") {
  const ModelParams p5 = make(2, 0.0, -1.0, 0.5);
  const auto d5 = deep_eigenvalue_search(p5);
  CHECK(d5.log_lambda > d5.log_lambda_asymptote);
  const ModelParams p4 = make(2, 0.0, -1.0, 0.4);
  const auto d4 = deep_eigenvalue_search(p4);
  CHECK(d4.log_lambda > d5.log_lambda);  // smaller eps, deeper eigenvalue
  // c = 0 variant: asymptote at 4 pi (a/eps^2 + 1/a)
  const ModelParams pc0 = make(2, 0.0, 0.0, 0.5);
  const auto dc0 = deep_eigenvalue_search(pc0);
  const double a = riemann::coupling_scale_a();
  CHECK(dc0.log_lambda_asymptote == Approx(4.0 * pi * (a / 0.25 + 1.0 / a)).epsilon(1e-12));
  CHECK(dc0.log_lambda > dc0.log_lambda_asymptote);
  // the runaway root is far outside double range here
  CHECK_FALSE(d5.singularity.has_value());
  CHECK_THROWS_AS(deep_eigenvalue_search(make(2, 1.0, -1.0, 0.1)), UnsupportedRegimeError);
}

TEST_CASE("zero-energy resonance detector") {
  // c = 0: coefficient i eps^2/(16 pi^2), any theta0
  for (double th0 : {0.0, 0.7, -0.9}) {
    const ModelParams p = make(3, th0, 0.0, 0.1);
    const auto r = zero_resonance_detector(p);
    CAPTURE(th0);
    CHECK(r.present);
    CHECK(r.limit == ZeroResonanceResult::Limit::finite);
    CHECK(rel(r.coefficient, Complex(0.0, 0.01 / (16.0 * pi * pi))) < 1e-3);
  }
  // c != 0: the root moves off the origin, the limit diverges
  const auto moved = zero_resonance_detector(make(3, 0.5, -0.5, 0.1));
  CHECK_FALSE(moved.present);
  CHECK(moved.limit == ZeroResonanceResult::Limit::diverging);
  // eps = 0: threshold eigenvalue, not a resonance; D/sqrt(z) -> 0
  const auto eig = zero_resonance_detector(make(3, 0.5, 0.0, 0.0));
  CHECK_FALSE(eig.present);
  CHECK(eig.limit == ZeroResonanceResult::Limit::vanishing);
}

TEST_CASE("resonant state verification") {
  CHECK(verify_resonant_state(make(3, 0.0, 0.0, 0.3)));
  CHECK(verify_resonant_state(make(3, 1.2, 0.0, 0.3)));  // theta0 drops out, f0 = 0
  // wrong sign on channel 0 violates the coupling conditions
  const ModelParams p = make(3, 0.0, 0.0, 0.3);
  TwoChannelState bad = resonant_state(p);
  bad.channel0 = [&p](double x) { return +p.epsilon / (4.0 * pi * x); };
  CHECK_FALSE(verify_resonant_state(p, bad));
  // eps -> 0: channel 0 dies, channel 1 keeps the threshold-state direction
  const auto tiny = resonant_state(make(3, 0.0, 0.0, 1e-8));
  CHECK(std::abs(tiny.channel0(1.0)) < 1e-8);
  const auto profile =
      dispersion::unperturbed_spectrum(make(3, 0.0, 0.0, 0.0)).bound_state_profile;
  const double ratio1 = tiny.channel1(0.7) / profile(1, 0.7).real();
  const double ratio2 = tiny.channel1(1.9) / profile(1, 1.9).real();
  CHECK(ratio1 == Approx(ratio2).epsilon(1e-12));  // proportional profiles
  CHECK_THROWS_AS(verify_resonant_state(make(3, 0.0, -1.0, 0.3)), std::invalid_argument);
}

TEST_CASE("root cluster: three roots at the cube-sector angles") {
  const double eps = 1e-3;
  const ModelParams p = make(1, 0.0, 0.0, eps);
  const double scale = std::pow(eps, 4.0 / 3.0) / std::pow(2.0, 2.0 / 3.0);
  const auto roots = root_cluster(p, 10.0 * std::pow(eps, 4.0 / 3.0));
  REQUIRE(roots.size() == 3);
  // moduli agree to O(eps^{8/3}) absolute spread
  double mn = 1e300, mx = 0.0;
  for (const auto& r : roots) {
    mn = std::min(mn, std::abs(r.location));
    mx = std::max(mx, std::abs(r.location));
    CHECK(std::abs(std::abs(r.location) - scale) < 0.01 * scale);
  }
  CHECK(mx - mn <= 10.0 * std::pow(eps, 8.0 / 3.0));
  // args near pi, -pi/3, -5 pi/3 (surface angles)
  auto arg_on = [](const Singularity& s) {
    const double a = std::arg(s.location);
    if (s.sheet == 0) return a < 0 ? a + 2.0 * pi : a;
    return a > 0 ? a - 2.0 * pi : a;
  };
  bool seen_pi = false, seen_m13 = false, seen_m53 = false;
  for (const auto& r : roots) {
    const double a = arg_on(r);
    if (std::abs(a - pi) < 0.05) {
      seen_pi = true;
      CHECK(r.kind == SingularityKind::isolated_eigenvalue);
      CHECK(r.sheet == 0);
    }
    if (std::abs(a + pi / 3.0) < 0.05) seen_m13 = true;
    if (std::abs(a + 5.0 * pi / 3.0) < 0.05) seen_m53 = true;
  }
  CHECK(seen_pi);
  CHECK(seen_m13);
  CHECK(seen_m53);
  // the off-axis pair is conjugate after sheet folding
  std::vector<Complex> off;
  for (const auto& r : roots)
    if (r.kind == SingularityKind::resonance) off.push_back(r.location);
  REQUIRE(off.size() == 2);
  CHECK(std::abs(off[0] - std::conj(off[1])) < 1e-12 * std::abs(off[0]));
}

TEST_CASE("epsilon -> 0: leading power of |location| per regime") {
  struct Cell {
    int d;
    double th0, c, power;
    bool resonance;
  };
  const Cell cells[] = {
      {1, 1.0, -1.0, 1.0, true},        // case 1
      {1, 0.0, -1.0, 1.0, true},        // case 2
      {3, 0.5, -2.0, 1.0, true},        // case 3
      {1, 0.0, 0.0, 4.0 / 3.0, false},  // case 4 eigenvalue
      {1, 1.0, 0.0, 2.0, true},         // case 4 resonance
      {2, 5.0, 0.0, 2.0, true},         // case 5 resonance
      {1, 0.7, 1.0, 1.0, false},        // case 7
  };
  const std::vector<double> ladder{1e-2, 1e-3, 1e-4};
  for (const auto& cell : cells) {
    std::vector<double> mags;
    for (double eps : ladder) {
      const ModelParams p = make(cell.d, cell.th0, cell.c, eps);
      const auto regime = classify_regime(p);
      Complex loc;
      if (cell.resonance) {
        loc = resonance_fixed_point(p, regime).first.location;
      } else {
        const auto [lo, hi] = regime_bracket(p, regime);
        loc = eigenvalue_bisection(p, lo, hi).location;
      }
      mags.push_back(std::abs(loc));
    }
    std::vector<double> lad = ladder;
    CAPTURE(cell.d);
    CAPTURE(cell.c);
    CHECK(std::abs(slope_fit(lad, mags) - cell.power) < 0.1);
  }
}

TEST_CASE("positive-axis dispersion stays clear of zero") {
  // case 1 regime, including the exact lambda = 1 point
  const ModelParams p = make(1, 1.0, -1.0, 0.3);
  double min_abs = 1e300;
  for (int i = 0; i <= 3000; ++i) {
    const double lam = 1e-6 + (10.0 - 1e-6) * i / 3000.0;
    min_abs = std::min(min_abs, std::abs(dispersion::d_epsilon(p, {{lam, 0.0}, 0}, 0)));
  }
  CHECK(min_abs > 1e-2);
  CHECK(std::abs(dispersion::d_epsilon(p, {{1.0, 0.0}, 0}, 0)) > 0.1);
  // eps = 0, theta0 > 0, d = 1: strictly positive on (0, inf); the threshold
  // eigenvalue at lambda = 0 pulls |D_0| to zero only at the edge itself
  const ModelParams p0 = make(1, 1.5, 0.0, 0.0);
  double m0 = 1e300, m0_away = 1e300;
  for (int i = 0; i <= 3000; ++i) {
    const double lam = 1e-6 + (10.0 - 1e-6) * i / 3000.0;
    const double v = std::abs(dispersion::d_epsilon(p0, {{lam, 0.0}, 0}, 0));
    m0 = std::min(m0, v);
    if (lam >= 0.1) m0_away = std::min(m0_away, v);
  }
  CHECK(m0 > 0.0);
  CHECK(m0_away > 0.1);
}
