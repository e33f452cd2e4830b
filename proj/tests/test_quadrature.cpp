#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "besov/quadrature.hpp"
#include "besov/specfun.hpp"
#include "besov/zonal.hpp"

using namespace besov;

namespace {
constexpr double kPi = 3.14159265358979323846;

double ball_mass_exact(int n, double gamma) {
  // int_B (1-|x|^2)^gamma dv = pi^(n/2) Gamma(gamma+1) / Gamma(gamma+n/2+1)
  return std::pow(kPi, 0.5 * n) *
         std::exp(log_gamma(gamma + 1.0) - log_gamma(gamma + 0.5 * n + 1.0));
}
}  // namespace

TEST_CASE("Gauss-Jacobi on [0,1]: Legendre and Chebyshev sanity") {
  std::vector<double> t, w;
  gauss_jacobi_01(5, 0.0, 0.0, t, w);
  double mass = 0.0, m3 = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mass += w[i];
    m3 += w[i] * t[i] * t[i] * t[i];
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m3 == doctest::Approx(0.25).epsilon(1e-13));
  // symmetric nodes around 1/2
  for (std::size_t i = 0; i < t.size(); ++i)
    CHECK(t[i] + t[t.size() - 1 - i] == doctest::Approx(1.0).epsilon(1e-13));

  gauss_jacobi_01(8, -0.5, -0.5, t, w);
  double m2 = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) m2 += w[i] * t[i] * t[i];
  CHECK(m2 == doctest::Approx(3.0 * kPi / 8.0).epsilon(1e-13));

  CHECK_THROWS_AS(gauss_jacobi_01(0, 0.0, 0.0, t, w), domain_error);
  CHECK_THROWS_AS(gauss_jacobi_01(4, -1.0, 0.0, t, w), domain_error);
}

TEST_CASE("ball volumes") {
  RadialSplit split;
  split.radial_order = 16;
  split.sphere_order = 32;
  auto one = [](std::span<const double>) { return 1.0; };
  CHECK(integrate(build_ball_rule(2, split, Measure::lebesgue()), one) ==
        doctest::Approx(kPi).epsilon(1e-10));
  CHECK(integrate(build_ball_rule(3, split, Measure::lebesgue()), one) ==
        doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-10));
  RadialSplit small = split;
  small.sphere_order = 6;
  CHECK(integrate(build_ball_rule(4, small, Measure::lebesgue()), one) ==
        doctest::Approx(kPi * kPi / 2.0).epsilon(1e-10));
}

TEST_CASE("dv_alpha has unit mass, fractional alpha included") {
  RadialSplit split;
  split.radial_order = 24;
  split.sphere_order = 16;
  auto one = [](std::span<const double>) { return 1.0; };
  for (int n : {2, 3}) {
    for (double alpha : {0.5, 1.0, 2.0, 3.5}) {
      const double m = integrate(build_ball_rule(n, split, Measure::weighted(alpha)), one);
      CHECK(m == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("fractional dv_beta mass matches the Beta closed form") {
  RadialSplit split;
  split.radial_order = 24;
  split.sphere_order = 16;
  auto one = [](std::span<const double>) { return 1.0; };
  const double got = integrate(build_ball_rule(3, split, Measure::power(3.75)), one);
  const double want = std::pow(kPi, 1.5) * std::exp(log_gamma(4.75) - log_gamma(6.25));
  CHECK(want == doctest::Approx(0.4996048766645256).epsilon(1e-13));
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
  // a non-folded polynomial integrand on the plain rule
  auto f = [](std::span<const double> x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return (1.0 - r2) * (1.0 - r2);
  };
  const double got2 = integrate(build_ball_rule(2, split, Measure::lebesgue()), f);
  CHECK(got2 == doctest::Approx(kPi / 3.0).epsilon(1e-12));
  CHECK(ball_mass_exact(2, 2.0) == doctest::Approx(kPi / 3.0).epsilon(1e-13));
}

TEST_CASE("unit tau norm of the standard decaying profile") {
  // g = beta^{-1} constant, decay m+alpha+n/p; the tau norm is exactly 1.
  const int n = 2, m = 1;
  const double alpha = 1.0, p = 2.0;
  const double decay = m + alpha + double(n) / p;
  const double betap = std::pow(kPi, 0.5 * n) *
                       std::exp(log_gamma(p * (m + alpha) + 1.0) -
                                log_gamma(p * (m + alpha) + 0.5 * n + 1.0));
  const double beta = std::pow(betap, 1.0 / p);
  CHECK(beta == doctest::Approx(std::sqrt(kPi / 5.0)).epsilon(1e-13));
  RadialSplit split;
  auto g = [&](std::span<const double>) { return 1.0 / beta; };
  CHECK(tau_lp_norm(n, split, g, p, decay) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("odd integrands vanish by central symmetry") {
  RadialSplit split;
  split.radial_order = 12;
  split.sphere_order = 14;
  for (int n : {2, 3, 4}) {
    RadialSplit s = split;
    if (n == 4) s.sphere_order = 6;
    auto f = [](std::span<const double> x) { return x[0]; };
    CHECK(std::fabs(integrate(build_ball_rule(n, s, Measure::weighted(1.5)), f)) < 1e-12);
  }
}

TEST_CASE("rotation invariance of the n=3 rule") {
  RadialSplit split;
  split.radial_order = 20;
  split.sphere_order = 24;
  const QuadratureRule rule = build_ball_rule(3, split, Measure::lebesgue());
  const double c = std::cos(0.7), s = std::sin(0.7);
  auto f = [](std::span<const double> x) {
    return std::exp(0.9 * x[0] - 0.4 * x[1] + 0.2 * x[2]);
  };
  auto frot = [&](std::span<const double> x) {
    const double y0 = c * x[0] - s * x[2];
    const double y1 = x[1];
    const double y2 = s * x[0] + c * x[2];
    const double y[3] = {y0, y1, y2};
    return std::exp(0.9 * y[0] - 0.4 * y[1] + 0.2 * y[2]);
  };
  CHECK(integrate(rule, f) == doctest::Approx(integrate(rule, frot)).epsilon(1e-9));
}

TEST_CASE("refinement stability") {
  auto f = [](std::span<const double> x) { return std::exp(x[0]); };
  RadialSplit coarse{16, 32, 2.0, RadialScheme::gauss_jacobi};
  RadialSplit fine{32, 64, 2.0, RadialScheme::gauss_jacobi};
  const double a = integrate(build_ball_rule(2, coarse, Measure::weighted(0.5)), f);
  const double b = integrate(build_ball_rule(2, fine, Measure::weighted(0.5)), f);
  CHECK(std::fabs(a - b) < 1e-10);
}

TEST_CASE("clustered Legendre cross-check") {
  auto f = [](std::span<const double> x) { return std::exp(x[0] + 0.3 * x[1]); };
  RadialSplit jac{32, 48, 2.0, RadialScheme::gauss_jacobi};
  RadialSplit clu{48, 48, 2.0, RadialScheme::clustered_legendre};
  const double a = integrate(build_ball_rule(2, jac, Measure::power(1.0)), f);
  const double b = integrate(build_ball_rule(2, clu, Measure::power(1.0)), f);
  CHECK(a == doctest::Approx(b).epsilon(1e-8));
  RadialSplit bad = clu;
  bad.clustering_kappa = 0.5;
  CHECK_THROWS_AS(build_ball_rule(2, bad, Measure::lebesgue()), domain_error);
}

TEST_CASE("sphere rules: mass, zonal orthogonality, reproducing") {
  for (int n : {2, 3, 4}) {
    const int order = n == 4 ? 8 : 16;
    const QuadratureRule sph = build_sphere_rule(n, order, 42);
    double mass = 0.0;
    for (double w : sph.weights) mass += w;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> xi(static_cast<std::size_t>(n), 0.0);
    xi[0] = 1.0;
    // int_S Z_j(xi, .) dsigma = 0 for j >= 1
    for (int j : {1, 2, 3}) {
      double acc = 0.0;
      for (std::size_t i = 0; i < sph.size(); ++i)
        acc += sph.weights[i] * zonal(n, j, xi, sph.node(i));
      CHECK(std::fabs(acc) < 1e-9);
    }
    // reproducing on the sphere: int Z_j(xi,z) Z_j(z,eta) dsigma(z) = Z_j(xi,eta)
    std::vector<double> eta(static_cast<std::size_t>(n), 0.0);
    eta[n - 1] = n == 2 ? 0.0 : 0.6;
    eta[0] = n == 2 ? 0.8 : 0.8;
    if (n == 2) eta[1] = 0.6;
    double ee = 0.0;
    for (double c : eta) ee += c * c;
    for (auto& c : eta) c /= std::sqrt(ee);
    const int j = 3;
    double acc = 0.0;
    for (std::size_t i = 0; i < sph.size(); ++i)
      acc += sph.weights[i] * zonal(n, j, xi, sph.node(i)) * zonal(n, j, sph.node(i), eta);
    CHECK(acc == doctest::Approx(zonal(n, j, xi, eta)).epsilon(1e-9));
  }
}

TEST_CASE("besov seminorm of the coordinate function") {
  Params prm;  // n=2, alpha=1, p=2, m=1
  auto partials = [](const std::vector<int>& k, std::span<const double>) {
    return k[0] == 1 && k[1] == 0 ? 1.0 : 0.0;
  };
  RadialSplit split;
  CHECK(besov_seminorm(prm, partials, split) ==
        doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
  Params bad = prm;
  bad.p = 1.0;
  bad.m = 1;
  bad.n = 3;  // p*m - n = -2
  CHECK_THROWS_AS(besov_seminorm(bad, partials, split), domain_error);
}

TEST_CASE("tau and sphere tags are rejected where meaningless") {
  RadialSplit split;
  CHECK_THROWS_AS(build_ball_rule(2, split, Measure::tau()), domain_error);
  CHECK_THROWS_AS(build_ball_rule(2, split, Measure::sphere()), domain_error);
  CHECK_THROWS_AS(build_ball_rule(2, split, Measure::power(-1.0)), domain_error);
  CHECK_THROWS_AS(build_ball_rule(2, split, Measure::weighted(0.0)), domain_error);
  auto g = [](std::span<const double>) { return 1.0; };
  CHECK_THROWS_AS(tau_lp_norm(3, split, g, 2.0, 1.0), domain_error);  // 2-3 = -1
}

TEST_CASE("JSON round trip is bit exact") {
  RadialSplit split;
  split.radial_order = 6;
  split.sphere_order = 8;
  const QuadratureRule rule = build_ball_rule(3, split, Measure::weighted(2.5), 7);
  const QuadratureRule back = rule_from_json(rule_to_json(rule));
  CHECK(back.n == rule.n);
  CHECK(back.measure.kind == rule.measure.kind);
  CHECK(back.measure.param == rule.measure.param);
  CHECK(back.seed == rule.seed);
  CHECK(back.split.radial_order == rule.split.radial_order);
  CHECK(back.split.sphere_order == rule.split.sphere_order);
  REQUIRE(back.points.size() == rule.points.size());
  REQUIRE(back.weights.size() == rule.weights.size());
  for (std::size_t i = 0; i < rule.points.size(); ++i) CHECK(back.points[i] == rule.points[i]);
  for (std::size_t i = 0; i < rule.weights.size(); ++i)
    CHECK(back.weights[i] == rule.weights[i]);
}

TEST_CASE("caching returns the same object") {
  RadialSplit split;
  split.radial_order = 4;
  split.sphere_order = 6;
  const QuadratureRule& a = cached_ball_rule(2, split, Measure::lebesgue(), 1);
  const QuadratureRule& b = cached_ball_rule(2, split, Measure::lebesgue(), 1);
  CHECK(&a == &b);
  const QuadratureRule& c = cached_ball_rule(2, split, Measure::lebesgue(), 2);
  CHECK(&a != &c);
}

TEST_CASE("non-finite integrand is reported") {
  RadialSplit split;
  split.radial_order = 4;
  split.sphere_order = 6;
  const QuadratureRule rule = build_ball_rule(2, split, Measure::lebesgue());
  auto f = [](std::span<const double> x) { return 1.0 / (x[0] - x[0]); };
  CHECK_THROWS_AS(integrate(rule, f), evaluation_error);
}
