#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "besov/kernels.hpp"
#include "besov/numerics.hpp"
#include "besov/quadrature.hpp"
#include "besov/specfun.hpp"
#include "besov/zonal.hpp"

using namespace besov;

namespace {

// n=2 closed form: R_alpha = 2 Re (1-z)^-(1+alpha) - 1 with z the product
// angle-difference variable of the pair.
double planar_closed(double alpha, std::span<const double> x, std::span<const double> y) {
  const std::complex<double> z(x[0] * y[0] + x[1] * y[1], x[1] * y[0] - x[0] * y[1]);
  return 2.0 * std::pow(1.0 - z, -(1.0 + alpha)).real() - 1.0;
}

}  // namespace

TEST_CASE("bracket identities") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int n : {2, 3, 4}) {
    std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
    for (int t = 0; t < 10; ++t) {
      for (double& c : x) c = u(rng);
      for (double& c : y) c = u(rng);
      double ym = 0.0, xm = 0.0;
      for (double c : y) ym += c * c;
      for (double c : x) xm += c * c;
      ym = std::sqrt(ym);
      xm = std::sqrt(xm);
      // |  |y| x - y/|y|  |
      double alt = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = ym * x[static_cast<std::size_t>(i)] -
                         y[static_cast<std::size_t>(i)] / ym;
        alt += d * d;
      }
      CHECK(bracket(x, y) == doctest::Approx(std::sqrt(alt)).epsilon(1e-12));
      CHECK(bracket(x, y) == doctest::Approx(bracket(y, x)).epsilon(1e-14));
      CHECK(bracket(x, y) >= 1.0 - xm * ym - 1e-14);
      CHECK(bracket(x, x) == doctest::Approx(1.0 - xm * xm).epsilon(1e-12));
    }
    // boundary slot: [x, xi] = |x - xi|
    std::vector<double> xi(static_cast<std::size_t>(n), 0.0);
    xi[0] = 0.6;
    xi[n - 1] = n == 2 ? 0.8 : std::sqrt(1.0 - 0.36);
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = x[static_cast<std::size_t>(i)] - xi[static_cast<std::size_t>(i)];
      d2 += d * d;
    }
    CHECK(bracket(x, xi) == doctest::Approx(std::sqrt(d2)).epsilon(1e-12));
  }
}

TEST_CASE("frozen kernel values") {
  const std::vector<double> x2{0.5, 0.2}, y2{-0.3, 0.6};
  const KernelSeries k1 = make_kernel(2, 1.0, 400, 1e-12);
  CHECK(bergman_kernel(k1, x2, y2) ==
        doctest::Approx(0.3141979915546586).epsilon(1e-11));
  const KernelSeries k2 = make_kernel(2, 2.0, 400, 1e-12);
  CHECK(bergman_kernel(k2, x2, y2) ==
        doctest::Approx(-0.1794351365724901).epsilon(1e-11));
  const std::vector<double> x3{0.3, -0.2, 0.4}, y3{0.1, 0.5, -0.2};
  const KernelSeries k3 = make_kernel(3, 1.0, 400, 1e-12);
  CHECK(bergman_kernel(k3, x3, y3) ==
        doctest::Approx(0.2969035743324188).epsilon(1e-11));
}

TEST_CASE("planar closed form across alpha") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-0.63, 0.63);
  for (double alpha : {0.5, 1.0, 2.0, 3.0}) {
    const KernelSeries ker = make_kernel(2, alpha, 300, 1e-10);
    for (int t = 0; t < 10; ++t) {
      const std::vector<double> x{u(rng), u(rng)}, y{u(rng), u(rng)};
      CHECK(bergman_kernel(ker, x, y) ==
            doctest::Approx(planar_closed(alpha, x, y)).epsilon(1e-8));
    }
  }
}

TEST_CASE("center value and symmetry") {
  const KernelSeries ker = make_kernel(3, 1.5);
  const std::vector<double> zero{0.0, 0.0, 0.0};
  const std::vector<double> y{0.2, -0.7, 0.1};
  CHECK(bergman_kernel(ker, zero, y) == 1.0);
  const std::vector<double> x{0.5, 0.1, -0.3};
  CHECK(bergman_kernel(ker, x, y) == bergman_kernel(ker, y, x));
  // alpha = 0 center value is 1/|B_n|
  const KernelSeries k0 = make_kernel(3, 0.0);
  CHECK(bergman_kernel(k0, zero, y) ==
        doctest::Approx(3.0 / (4.0 * 3.14159265358979323846)).epsilon(1e-12));
}

TEST_CASE("coefficient growth approaches j^alpha") {
  for (int n : {2, 3}) {
    for (double alpha : {0.5, 1.0, 2.0}) {
      const KernelSeries ker = make_kernel(n, alpha, 200);
      const double a0 = std::exp(log_gamma(0.5 * n + alpha) - log_gamma(0.5 * n));
      const double a200 = ker.coef[200] * a0;
      CHECK(a200 / std::pow(200.0, alpha) == doctest::Approx(1.0).epsilon(0.05));
    }
  }
}

TEST_CASE("doubling the cap stays within the certified tail") {
  const std::vector<double> x{0.85, 0.0}, y{0.6, 0.55};
  const KernelSeries loose = make_kernel(2, 1.5, 80, 1e-6);
  const KernelSeries tight = make_kernel(2, 1.5, 400, 1e-12);
  const KernelValue a = bergman_kernel_detail(loose, x, y);
  const KernelValue b = bergman_kernel_detail(tight, x, y);
  CHECK(std::fabs(a.value - b.value) <= 3.0 * (a.tail_bound + b.tail_bound + 1e-12));
  CHECK(a.terms_used < b.terms_used);
  CHECK(a.tail_bound <= 1e-6 * std::fabs(a.value) + 1e-300);
}

TEST_CASE("partials agree with the symbolic low-degree series") {
  const KernelSeries ker = make_kernel(2, 1.0, 200, 1e-12);
  const std::vector<double> x{0.2, 0.1}, y{0.3, -0.4};
  for (const std::vector<int> k : {std::vector<int>{1, 0}, std::vector<int>{0, 1},
                                   std::vector<int>{1, 1}, std::vector<int>{2, 0}}) {
    double direct = 0.0;
    for (int j = 0; j <= 60; ++j)
      direct += ker.coef[static_cast<std::size_t>(j)] * zonal_partial(2, j, k, x, y);
    CHECK(kernel_partial(ker, k, x, y) == doctest::Approx(direct).epsilon(1e-10));
  }
  const KernelSeries k3 = make_kernel(3, 0.5, 200, 1e-12);
  const std::vector<double> x3{0.15, -0.2, 0.1}, y3{0.3, 0.2, -0.25};
  const std::vector<int> kk{1, 0, 1};
  double direct = 0.0;
  for (int j = 0; j <= 60; ++j)
    direct += k3.coef[static_cast<std::size_t>(j)] * zonal_partial(3, j, kk, x3, y3);
  CHECK(kernel_partial(k3, kk, x3, y3) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("partials agree with finite differences") {
  const KernelSeries ker = make_kernel(2, 1.0, 300, 1e-12);
  const std::vector<double> x{0.35, -0.25}, y{0.4, 0.3};
  const double h = 1e-5;
  for (int l = 0; l < 2; ++l) {
    std::vector<int> k{0, 0};
    k[static_cast<std::size_t>(l)] = 1;
    std::vector<double> xp = x, xm = x;
    xp[static_cast<std::size_t>(l)] += h;
    xm[static_cast<std::size_t>(l)] -= h;
    const double fd = (bergman_kernel(ker, xp, y) - bergman_kernel(ker, xm, y)) / (2 * h);
    CHECK(kernel_partial(ker, k, x, y) == doctest::Approx(fd).epsilon(1e-6));
  }
  // all order-2 partials in one pass match the single-index calls
  const auto both = kernel_partials(ker, 2, x, y);
  const auto ks = multi_indices(2, 2);
  REQUIRE(both.size() == ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i)
    CHECK(both[i] == doctest::Approx(kernel_partial(ker, ks[i], x, y)).epsilon(1e-12));
}

TEST_CASE("reproducing property at a spot pair") {
  const KernelSeries ker = make_kernel(2, 1.0, 200, 1e-10);
  RadialSplit split;
  split.radial_order = 24;
  split.sphere_order = 32;
  const QuadratureRule& rule = cached_ball_rule(2, split, Measure::weighted(1.0));
  const std::vector<double> x{0.3, 0.2}, x0{1.0, 0.0};
  const int m = 2;
  const double got = integrate(rule, [&](std::span<const double> y) {
    return bergman_kernel(ker, x, y) * zonal(2, m, y, x0);
  });
  CHECK(got == doctest::Approx(zonal(2, m, x, x0)).epsilon(1e-6));
}

TEST_CASE("truncation failure is reported with its bound") {
  const KernelSeries ker = make_kernel(2, 1.0, 200, 1e-8);
  const std::vector<double> x{0.9975, 0.0}, y{0.9975, 0.0};
  try {
    bergman_kernel(ker, x, y);
    FAIL("expected truncation_error");
  } catch (const truncation_error& e) {
    CHECK(e.terms_used == 201);
    CHECK(e.tail_bound > 0.0);
    CHECK(e.last_increment > 0.0);
  }
}

TEST_CASE("growth probe is deterministic and sane") {
  const KernelSeries ker = make_kernel(2, 1.0, 200, 1e-8);
  GrowthProbe probe;
  probe.samples = 64;
  probe.seed = 9;
  const GrowthEstimate a = estimate_growth_constant(ker, 1, probe);
  const GrowthEstimate b = estimate_growth_constant(ker, 1, probe);
  CHECK(growth_to_json(a) == growth_to_json(b));
  CHECK(a.constant > 0.0);
  CHECK(a.boundary_rho >= 0.8);
  CHECK(a.boundary_rho < 0.99);  // cap 200 cannot certify arbitrarily close
  GrowthProbe other = probe;
  other.seed = 10;
  CHECK(growth_to_json(estimate_growth_constant(ker, 1, other)) != growth_to_json(a));
}
