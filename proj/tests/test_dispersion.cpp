#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "resonance/dispersion.hpp"

using namespace resonance;
using namespace resonance::dispersion;
using doctest::Approx;
using riemann::Dimension;
using riemann::pi;

namespace {
const Complex I(0.0, 1.0);

ModelParams make(int d, double th0, double c, double b, double eps) {
  return ModelParams{Dimension(d), th0, c, b, eps};
}
}  // namespace

TEST_CASE("theta1_eps per dimension") {
  CHECK(make(1, 0, 2.0, 1, 0.1).theta1_eps() == Approx(2.2));
  CHECK(make(2, 0, 2.0, 1, 0.1).theta1_eps() == Approx(riemann::coupling_scale_a() + 0.2));
  CHECK(make(3, 0, 2.0, 1, 0.1).theta1_eps() == Approx(-4.0 * pi + 0.2));
  CHECK_THROWS_AS(make(1, 0, 0, 1, -0.1).validate(), std::invalid_argument);
}

TEST_CASE("d_epsilon recovers the unperturbed d=1 eigenvalue") {
  // theta0 = 2: sigma_p(H_0) = {-1, 0}; D_0(-1) = 0
  const ModelParams p = make(1, 2.0, 0.0, 1.0, 0.0);
  CHECK(std::abs(d_epsilon(p, {{-1.0, 0.0}, 0}, 0)) <= 1e-12 * 10.0);
}

TEST_CASE("d_epsilon at z = 1 (d=1) stays finite and matches the printed value") {
  const ModelParams p = make(1, 1.0, -1.0, 1.0, 0.01);
  const Complex v = d_epsilon(p, {{1.0, 0.0}, 0}, 0);
  const Complex want =
      p.b * p.b * p.epsilon * p.epsilon - (p.theta0 + 2.0 * I) * (2.0 + p.c * p.epsilon);
  CHECK(std::abs(v - want) <= 1e-15 * std::abs(want));
  CHECK(std::abs(v) > 0.1);  // "trivially" nonzero
}

TEST_CASE("d_epsilon d=3, c=0: D(z)/sqrt(z) -> i eps^2/(4 pi)^2") {
  // the correction is O(sqrt(z) / eps^2), so the probe must sit very deep
  const ModelParams p = make(3, 0.7, 0.0, 1.0, 0.1);
  const Complex want = I * p.epsilon * p.epsilon / (16.0 * pi * pi);
  const riemann::SheetPoint z{{-1e-18, 0.0}, 0};
  const Complex ratio = d_epsilon_stable(p, z, 0) / riemann::sheet_sqrt(z);
  CHECK(std::abs(ratio - want) < 1e-5 * std::abs(want));
}

TEST_CASE("d=2 branch points are rejected, d=1,3 evaluate") {
  const ModelParams p2 = make(2, 1.0, -1.0, 1.0, 0.01);
  CHECK_THROWS_AS(d_epsilon(p2, {{0.0, 0.0}, 0}, 0), std::domain_error);
  CHECK_THROWS_AS(d_epsilon(p2, {{1.0, 0.0}, 0}, 0), std::domain_error);
  const ModelParams p3 = make(3, 1.0, -1.0, 1.0, 0.01);
  CHECK(std::isfinite(std::abs(d_epsilon(p3, {{0.0, 0.0}, 0}, 0))));
}

TEST_CASE("frozen cross-implementation values of D_eps") {
  // independently computed with 60-digit arithmetic, one point per dimension
  const ModelParams p1 = make(1, 1.0, -1.0, 1.0, 0.1);
  CHECK(std::abs(d_epsilon(p1, {{-1.0, 0.0}, 0}, 0) - Complex(-0.91842712474619010, 0.0)) <
        1e-14);
  const ModelParams p3 = make(3, 0.7, -0.4, 1.0, 0.2);
  CHECK(std::abs(d_epsilon(p3, {{-0.5, 0.3}, 0}, 0) -
                 Complex(-0.24724168679394232, 0.13047187720610852)) < 1e-14);
  const ModelParams p2 = make(2, 0.7, -0.4, 1.0, 0.2);
  CHECK(std::abs(d_epsilon(p2, {{-0.5, 0.3}, 0}, 0) -
                 Complex(65.385102207059729, -32.874662120528344)) < 1e-12 * 70.0);
}

TEST_CASE("stable regrouping agrees with the printed grouping") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> re(-0.4, 0.4), im(-0.3, 0.3);
  for (int d : {1, 2, 3}) {
    const ModelParams p = make(d, 0.8, -0.6, 1.0, 0.05);
    for (int i = 0; i < 100; ++i) {
      const Complex z(re(rng), im(rng));
      if (std::abs(z) < 1e-4 || std::abs(z) >= 0.5) continue;
      for (int sheet : {0, -1}) {
        const riemann::SheetPoint zp{z, sheet};
        const Complex a = d_epsilon(p, zp, 0);
        const Complex b = d_epsilon_stable(p, zp, 0);
        CHECK(std::abs(a - b) <= 1e-11 * (std::abs(a) + 1e-30));
        // derivative against a central difference of the stable form
        const double h = 1e-7 * std::max(std::abs(z), 0.01);
        const Complex num =
            (d_epsilon_stable(p, {z + h, sheet}, 0) - d_epsilon_stable(p, {z - h, sheet}, 0)) /
            (2.0 * h);
        const Complex der = d_epsilon_stable_derivative(p, zp, 0);
        CHECK(std::abs(num - der) <= 1e-5 * (std::abs(der) + 1.0));
      }
    }
  }
}

TEST_CASE("Schwarz reflection of D_eps on the physical sheet") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> re(-2.0, 2.0), im(0.05, 2.0);
  for (int d : {1, 2, 3}) {
    const ModelParams p = make(d, -0.3, 0.7, 1.0, 0.05);
    for (int i = 0; i < 100; ++i) {
      const Complex z(re(rng), im(rng));
      const Complex a = d_epsilon(p, {z, 0}, 0);
      const Complex b = d_epsilon(p, {std::conj(z), 0}, 0);
      CHECK(std::abs(b - std::conj(a)) <= 1e-13 * std::abs(a));
    }
  }
}

TEST_CASE("gamma matrix: symmetry and printed special values") {
  // off-diagonals share one subexpression, so equality is bit-exact
  for (int d : {1, 2, 3}) {
    const ModelParams p = make(d, 0.4, -0.8, 1.0, 0.07);
    const auto m = gamma_matrix(p, {{-0.3, 0.2}, 0}, 0);
    CHECK(m.g12 == m.g21);
  }
  // d=1: the factor sqrt(z-1) kills Gamma_12 at z = 1
  const auto m1 = gamma_matrix(make(1, 0.4, -0.8, 1.0, 0.07), {{1.0, 0.0}, 0}, 0);
  CHECK(std::abs(m1.g12) == 0.0);
  // eps = 0 decouples the channels in every dimension
  for (int d : {1, 2, 3}) {
    const auto m0 = gamma_matrix(make(d, 0.4, -0.8, 1.0, 0.0), {{-0.3, 0.2}, 0}, 0);
    CHECK(std::abs(m0.g12) == 0.0);
  }
  // d=3: Gamma_12 = b eps independent of z
  const ModelParams p3 = make(3, 0.4, -0.8, 2.0, 0.07);
  const auto a3 = gamma_matrix(p3, {{-0.3, 0.2}, 0}, 0);
  const auto b3 = gamma_matrix(p3, {{-1.7, -0.4}, -1}, 0);
  CHECK(a3.g12 == Complex(p3.b * p3.epsilon, 0.0));
  CHECK(b3.g12 == a3.g12);
}

TEST_CASE("resolvent correction kernel") {
  // eps = 0: off-diagonal kernel vanishes
  const ModelParams p0 = make(1, 0.7, -0.5, 1.0, 0.0);
  CHECK(std::abs(resolvent_correction_kernel(p0, {{-1.0, 0.0}, 0}, 0, 0.5, 1.5, 0, 1)) == 0.0);

  // d=1, z=-1, channel (0,0): frozen 60-digit substitution of the same chain
  {
    const ModelParams p = make(1, 1.0, -1.0, 1.0, 0.1);
    const riemann::SheetPoint z{{-1.0, 0.0}, 0};
    const Complex got = resolvent_correction_kernel(p, z, 0, 0.7, 1.3, 0, 0);
    CHECK(std::abs(got - Complex(0.069141196564476005, 0.0)) < 1e-15);
  }

  // d=3, c=0, near z=0, channel (1,1): kernel ~ (4 pi i/eps^2) e^{-x-x'}/(x x')/sqrt(z)
  {
    const ModelParams p = make(3, 0.7, 0.0, 1.0, 0.1);
    const double x = 0.9, xp = 1.4;
    const riemann::SheetPoint z{{-1e-16, 0.0}, 0};
    const Complex lhs =
        resolvent_correction_kernel(p, z, 0, x, xp, 1, 1) * riemann::sheet_sqrt(z);
    const Complex want = 4.0 * pi * I / (p.epsilon * p.epsilon) * std::exp(-x - xp) / (x * xp);
    CHECK(std::abs(lhs - want) < 1e-3 * std::abs(want));
  }

  // a spectral singularity raises PoleError: D_0(-1) = 0 exactly for theta0 = 2
  const ModelParams ppole = make(1, 2.0, 0.0, 1.0, 0.0);
  CHECK_THROWS_AS(resolvent_correction_kernel(ppole, {{-1.0, 0.0}, 0}, 0, 0.5, 0.5, 0, 0),
                  PoleError);
}

TEST_CASE("decoupled eigenvalue closed forms") {
  CHECK(decoupled_eigenvalue(make(1, 0.0, 1.0, 0.0, 0.1)) == Approx(-0.1025).epsilon(1e-15));
  CHECK(decoupled_eigenvalue(make(1, 0.0, 0.0, 0.0, 0.1)) == 0.0);
  CHECK(decoupled_eigenvalue(make(3, 0.0, 0.0, 0.0, 0.1)) == 0.0);
  // d=2 leading order -4 pi c eps/a^2
  const double a = riemann::coupling_scale_a();
  CHECK(decoupled_eigenvalue(make(2, 0.0, 1.0, 0.0, 1e-4)) ==
        Approx(-4.0 * pi * 1e-4 / (a * a)).epsilon(1e-3));
}

TEST_CASE("unperturbed spectrum per dimension") {
  const double a = riemann::coupling_scale_a();
  auto s1 = unperturbed_spectrum(make(1, 2.0, 0.0, 1.0, 0.0));
  CHECK(s1.point_spectrum == std::vector<double>{-1.0, 0.0});
  auto s3 = unperturbed_spectrum(make(3, -4.0 * pi, 0.0, 1.0, 0.0));
  CHECK(s3.point_spectrum == std::vector<double>{-1.0, 0.0});
  auto s2 = unperturbed_spectrum(make(2, a, 0.0, 1.0, 0.0));
  REQUIRE(s2.point_spectrum.size() == 2);
  CHECK(s2.point_spectrum[0] == Approx(-1.0).epsilon(1e-14));
  CHECK(s2.point_spectrum[1] == 0.0);
  CHECK(s2.threshold_eigenvalue_present);
  // theta0 classes without the extra eigenvalue
  CHECK(unperturbed_spectrum(make(1, -2.0, 0.0, 1.0, 0.0)).point_spectrum ==
        std::vector<double>{0.0});
  CHECK(unperturbed_spectrum(make(3, 1.0, 0.0, 1.0, 0.0)).point_spectrum ==
        std::vector<double>{0.0});
  CHECK_THROWS_AS(unperturbed_spectrum(make(1, 1.0, 0.0, 1.0, 0.1)), std::invalid_argument);

  // zero-residual consistency: D_0 vanishes on the reported spectrum
  for (int d : {1, 2, 3}) {
    const double th0 = d == 3 ? -11.0 : 1.5;
    const ModelParams p = make(d, th0, 0.0, 1.0, 0.0);
    for (double E : unperturbed_spectrum(p).point_spectrum) {
      if (E == 0.0) continue;  // threshold: the d=2 log is singular there
      const double scale = d == 2 ? 1e3 : 10.0;
      CHECK(std::abs(d_epsilon(p, {{E, 0.0}, 0}, 0)) <= 1e-12 * scale);
    }
  }

  // bound state profile: channel 0 empty, channel 1 the threshold state
  auto prof = unperturbed_spectrum(make(3, 1.0, 0.0, 1.0, 0.0)).bound_state_profile;
  CHECK(std::abs(prof(0, 1.3)) == 0.0);
  CHECK(std::abs(prof(1, 1.3) - std::sqrt(2.0) * std::exp(-1.3) / (4.0 * pi * 1.3)) < 1e-15);
  auto prof1 = unperturbed_spectrum(make(1, 1.0, 0.0, 1.0, 0.0)).bound_state_profile;
  CHECK(std::abs(prof1(1, 0.4) - std::exp(-0.4)) < 1e-15);
}

TEST_CASE("decoupling: D_eps - D_eps^{b=0} is O(eps^2) uniformly") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> re(-1.5, -0.2), im(0.2, 1.5);
  for (int d : {1, 2, 3}) {
    double worst = 0.0;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const ModelParams p = make(d, 0.9, -0.7, 1.0, eps);
      ModelParams p0 = p;
      p0.b = 0.0;
      for (int i = 0; i < 40; ++i) {
        const Complex z(re(rng), im(rng));
        const Complex diff = d_epsilon(p, {z, 0}, 0) - d_epsilon(p0, {z, 0}, 0);
        worst = std::max(worst, std::abs(diff) / (eps * eps));
      }
    }
    CHECK(worst < 100.0);  // ratio bounded over the ladder
  }
}
