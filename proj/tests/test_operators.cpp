#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "besov/operators.hpp"
#include "besov/specfun.hpp"
#include "besov/zonal.hpp"

using namespace besov;

namespace {
constexpr double kPi = 3.14159265358979323846;
const Params kDefault{2, 1.0, 2.0, 1};

OperatorConfig small_cfg() {
  OperatorConfig cfg;
  cfg.outer = {16, 24, 2.0, RadialScheme::gauss_jacobi};
  cfg.inner = {16, 24, 2.0, RadialScheme::gauss_jacobi};
  cfg.trials = 1;
  cfg.seed = 7;
  return cfg;
}
}  // namespace

TEST_CASE("candidate partials match finite differences") {
  TestFunction f;
  f.kind = WitnessKind::random_smooth;
  f.degree = 2;
  f.pole = {0.6, 0.8};
  f.boost = 1.7;
  f.coef = 1.3;
  const std::vector<double> x{0.35, -0.2};
  const double h = 1e-5;
  for (int l = 0; l < 2; ++l) {
    std::vector<int> k{0, 0};
    k[static_cast<std::size_t>(l)] = 1;
    std::vector<double> xp = x, xm = x;
    xp[static_cast<std::size_t>(l)] += h;
    xm[static_cast<std::size_t>(l)] -= h;
    const double fd = (eval_test_function(f, xp) - eval_test_function(f, xm)) / (2 * h);
    CHECK(test_function_partial(f, k, x) == doctest::Approx(fd).epsilon(1e-7));
  }
  // a second-order mixed partial through nested differences
  const std::vector<int> k11{1, 1};
  auto d1 = [&](std::span<const double> at) {
    std::vector<double> ap(at.begin(), at.end()), am(ap);
    ap[0] += h;
    am[0] -= h;
    return (eval_test_function(f, ap) - eval_test_function(f, am)) / (2 * h);
  };
  std::vector<double> yp = x, ym = x;
  yp[1] += h;
  ym[1] -= h;
  const double fd11 = (d1(yp) - d1(ym)) / (2 * h);
  CHECK(test_function_partial(f, k11, x) == doctest::Approx(fd11).epsilon(1e-5));
  // radial candidate loses the zonal factor entirely
  TestFunction r = f;
  r.degree = 0;
  CHECK(eval_test_function(r, x) ==
        doctest::Approx(1.3 * std::pow(1.0 - 0.35 * 0.35 - 0.04, 1.7)).epsilon(1e-14));
}

TEST_CASE("radial witness is tau-normalized") {
  const TestFunction psi = make_psi_witness(kDefault);
  CHECK(psi.coef == doctest::Approx(std::sqrt(5.0 / kPi)).epsilon(1e-13));
  CHECK(psi.boost == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(candidate_domain_norm(kDefault, psi) == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("bracket image: quadrature vs closed profile") {
  const TestFunction psi = make_psi_witness(kDefault);
  for (double r : {0.0, 0.4, 0.7}) {
    const std::vector<double> x{r, 0.0};
    const std::vector<double> tilted{r * 0.6, r * 0.8};
    const double closed = t_image_radial_closed(kDefault, psi, r);
    CHECK(apply_T(kDefault, psi, x) == doctest::Approx(closed).epsilon(1e-8));
    // the image of a radial candidate is radial
    CHECK(apply_T(kDefault, psi, tilted) == doctest::Approx(closed).epsilon(1e-8));
  }
  CHECK_THROWS_AS(t_image_radial_closed(kDefault, make_f_witness(kDefault), 0.5),
                  domain_error);
}

TEST_CASE("frozen norm of the bracket image of the radial witness") {
  OperatorConfig cfg;
  cfg.outer.radial_order = 128;
  cfg.trials = 0;
  const TestFunction psi = make_psi_witness(kDefault);
  CHECK(t_image_lp_norm(kDefault, psi, cfg) ==
        doctest::Approx(0.7919643759234442).epsilon(1e-9));
}

TEST_CASE("projection of the zonal witness is exactly its harmonic part") {
  const TestFunction fm = make_f_witness(kDefault);
  // inner radial profile integrates to a Beta factor; everything else is the
  // reproducing property degree by degree
  const double mu = 2.0 * fm.coef * (1.0 / kPi) * kPi * (1.0 / 6.0);
  const OperatorConfig cfg = small_cfg();
  for (const std::vector<double> x : {std::vector<double>{0.3, 0.2},
                                      std::vector<double>{-0.5, 0.1},
                                      std::vector<double>{0.0, 0.85}}) {
    CHECK(apply_P(kDefault, fm, x) ==
          doctest::Approx(mu * zonal(2, 1, x, fm.pole)).epsilon(1e-10));
  }
  const std::vector<double> at{0.3, 0.2};
  const auto parts = projection_partials(kDefault, fm, at, cfg);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == doctest::Approx(2.0 * mu).epsilon(1e-10));
  CHECK(parts[1] == doctest::Approx(0.0).epsilon(1e-12));

  CHECK(besov_norm_of_image(kDefault, fm, cfg) ==
        doctest::Approx(std::sqrt(2.0) / 6.0).epsilon(1e-10));
}

TEST_CASE("projection partials agree with differenced point values") {
  const Params pr = kDefault;
  const OperatorConfig cfg = small_cfg();
  const TestFunction f = make_random_candidate(pr, 3, 11);
  const std::vector<double> x{0.25, -0.4};
  const auto parts = projection_partials(pr, f, x, cfg);
  const double h = 1e-4;
  for (int l = 0; l < 2; ++l) {
    std::vector<double> xp = x, xm = x;
    xp[static_cast<std::size_t>(l)] += h;
    xm[static_cast<std::size_t>(l)] -= h;
    const double fd = (apply_P(pr, f, xp, cfg) - apply_P(pr, f, xm, cfg)) / (2 * h);
    CHECK(parts[static_cast<std::size_t>(l)] == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("dirichlet product of a radial square") {
  // f = (1-|x|^2)^2 in the plane: the gradient integral collapses to 4pi/3
  TestFunction f;
  f.kind = WitnessKind::radial_power;
  f.degree = 0;
  f.pole = {1.0, 0.0};
  f.boost = 2.0;
  const double got = dirichlet_inner_product(kDefault, f, f);
  CHECK(got == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-12));
  // symmetry in the two slots
  const TestFunction g = make_f_witness(kDefault);
  CHECK(dirichlet_inner_product(kDefault, f, g) ==
        doctest::Approx(dirichlet_inner_product(kDefault, g, f)).epsilon(1e-13));
  CHECK_THROWS_AS(dirichlet_inner_product(Params{3, 1.0, 4.0, 1}, f, f), domain_error);
}

TEST_CASE("bracket report for the integral operator") {
  OperatorConfig cfg = small_cfg();
  cfg.trials = 2;
  const NormBracket nb = bracket_T_norm(kDefault, cfg);
  REQUIRE(nb.witnesses.size() == 3);
  CHECK(nb.witnesses[0].kind == "radial_power");
  CHECK(nb.witnesses[0].ratio == doctest::Approx(0.7919643759234442).epsilon(1e-4));
  CHECK(nb.lower_empirical > 0.0);
  // coarse orders leave visible refinement deltas on random candidates; the
  // report must carry them honestly rather than hide them
  CHECK(nb.quad_error_raw > 0.0);
  CHECK(nb.quad_error_raw < 0.2);
  CHECK(nb.quad_error_safe == doctest::Approx(4.0 * nb.quad_error_raw + 1e-12));

  // the displayed sandwich is inconsistent and the witness sees it
  REQUIRE(nb.findings.size() == 6);
  CHECK_FALSE(nb.findings[0].ok);  // lower_displayed vs upper_displayed
  CHECK_FALSE(nb.findings[2].ok);  // witness ratio vs upper_displayed
  CHECK_FALSE(nb.findings[3].ok);  // witness ratio vs assembled chain
  CHECK(nb.findings[4].ok);        // certified lower bound holds
  CHECK(nb.findings[5].ok);        // dtilde <= d

  const std::string once = bracket_to_json(nb);
  const std::string twice = bracket_to_json(bracket_T_norm(kDefault, cfg));
  CHECK(once == twice);
  OperatorConfig other = cfg;
  other.seed = 8;
  CHECK(bracket_to_json(bracket_T_norm(kDefault, other)) != once);
}

TEST_CASE("bracket report for the projection") {
  const OperatorConfig cfg = small_cfg();
  const NormBracket nb = bracket_P_norm(kDefault, cfg);
  REQUIRE(nb.witnesses.size() == 2);
  CHECK(nb.witnesses[0].kind == "zonal_power");
  CHECK(nb.findings[0].ok);  // seminorm matches the corrected chain
  CHECK(nb.findings[1].ok);  // literal chain off by pi*sqrt(2)
  CHECK(nb.findings[2].ok);  // displayed lower bound below the empirical ratio
  CHECK(nb.lower_empirical >= nb.lower_paper.at("displayed"));
  CHECK(nb.conjecture_ratio > 0.0);
  CHECK(nb.upper_paper.at("growth_constant") > 0.0);
  CHECK(bracket_to_json(nb) == bracket_to_json(bracket_P_norm(kDefault, cfg)));
}

TEST_CASE("candidate construction guards") {
  CHECK_THROWS_AS(besov_norm_of_image(Params{3, 1.0, 1.5, 1}, make_psi_witness(kDefault),
                                      small_cfg()),
                  domain_error);
  TestFunction bad = make_psi_witness(kDefault);
  bad.boost = 0.0;
  CHECK_THROWS_AS(apply_T(kDefault, bad, std::vector<double>{0.1, 0.1}), domain_error);
  bad = make_psi_witness(kDefault);
  bad.pole = {1.0, 0.0, 0.0};
  CHECK_THROWS_AS(apply_T(kDefault, bad, std::vector<double>{0.1, 0.1}), domain_error);
  // same id and seed give the same candidate, different ids differ
  const TestFunction a = make_random_candidate(kDefault, 2, 5);
  const TestFunction b = make_random_candidate(kDefault, 2, 5);
  const TestFunction c = make_random_candidate(kDefault, 3, 5);
  CHECK(a.boost == b.boost);
  CHECK(a.pole == b.pole);
  CHECK((a.boost != c.boost || a.pole != c.pole || a.degree != c.degree));
}
