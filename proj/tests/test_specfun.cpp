#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "besov/errors.hpp"
#include "besov/specfun.hpp"

using namespace besov;

TEST_CASE("log_gamma matches the library implementation across (0,200)") {
    // std::lgamma is the independent reference here; the in-tree routine
    // must track it to near machine precision.
    for (double x = 0.05; x < 200.0; x += 0.173) {
        double ours = log_gamma(x);
        double ref = std::lgamma(x);
        CHECK(std::abs(ours - ref) <= 1e-13 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("log_gamma spot values") {
    CHECK(log_gamma(3.5) == doctest::Approx(1.2009736023470742).epsilon(1e-14));
    CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(3.14159265358979323846)).epsilon(1e-14));
    CHECK(log_gamma(1.0) == doctest::Approx(0.0).scale(1).epsilon(1e-14));
    CHECK(log_gamma(2.0) == doctest::Approx(0.0).scale(1).epsilon(1e-14));
    CHECK_THROWS_AS(log_gamma(0.0), domain_error);
    CHECK_THROWS_AS(log_gamma(-1.5), domain_error);
}

TEST_CASE("signed log gamma on the negative axis") {
    // Gamma(-0.5) = -2 sqrt(pi), Gamma(-2.5) = -8 sqrt(pi)/15.
    CHECK(gamma_fn(-0.5) == doctest::Approx(-3.5449077018110318).epsilon(1e-13));
    CHECK(gamma_fn(-2.5) == doctest::Approx(-0.9453087204829419).epsilon(1e-13));
    CHECK(gamma_fn(-1.5) == doctest::Approx(2.3632718012073544).epsilon(1e-13));
    auto s = log_gamma_signed(-2.5);
    CHECK(s.sign == -1);
    CHECK_THROWS_AS(log_gamma_signed(-3.0), domain_error);
    CHECK_THROWS_AS(log_gamma_signed(0.0), domain_error);
}

TEST_CASE("pochhammer") {
    CHECK(pochhammer(3.0, 4) == doctest::Approx(360.0));
    CHECK(pochhammer(0.5, 3) == doctest::Approx(0.5 * 1.5 * 2.5));
    CHECK(pochhammer(-2.0, 4) == doctest::Approx(0.0));
    CHECK(pochhammer(7.3, 0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(pochhammer(1.0, -1), domain_error);
}

TEST_CASE("binomial integer conventions") {
    CHECK(binomial(5, 2) == doctest::Approx(10.0));
    CHECK(binomial(3, 5) == doctest::Approx(0.0));
    CHECK(binomial(4, -1) == doctest::Approx(0.0));
    CHECK(binomial(-1, 1) == doctest::Approx(0.0));
    CHECK(binomial(0, 0) == doctest::Approx(1.0));
    CHECK(binomial(60, 30) == doctest::Approx(118264581564861424.0).epsilon(1e-12));
}

TEST_CASE("binomial real arguments") {
    // C(2.5, 0.5): the half-integer gammas cancel to exactly 15/8.
    CHECK(binomial(2.5, 0.5) == doctest::Approx(1.875).epsilon(1e-13));
}

TEST_CASE("2F1 power series region") {
    CHECK(hyp2f1(1.0, 1.0, 2.0, 0.5) ==
          doctest::Approx(1.3862943611198906).epsilon(5e-12));  // 2 ln 2
    CHECK(hyp2f1(0.3, 0.7, 1.1, 0.0) == doctest::Approx(1.0));
    CHECK(hyp2f1(0.5, 0.5, 1.0, 0.25) ==
          doctest::Approx(1.0731820071493644).epsilon(5e-12));
    CHECK(hyp2f1(1.5, 1.5, 5.0, 0.9) ==
          doctest::Approx(1.8570630704017242).epsilon(5e-12));
}

TEST_CASE("2F1 near one switches expansion without losing accuracy") {
    CHECK(hyp2f1(0.5, 1.2, 2.5, 0.999) ==
          doctest::Approx(1.7109581214375910).epsilon(1e-12));
    CHECK(hyp2f1(0.5, 1.2, 2.5, 1.0 - 1e-6) ==
          doctest::Approx(1.7243967452649750).epsilon(1e-12));
    // Limit point: F -> Gamma form as t -> 1.
    CHECK(gauss_value(0.5, 1.2, 2.5) ==
          doctest::Approx(1.7244658638359773).epsilon(1e-13));
    CHECK(std::abs(hyp2f1(0.5, 1.2, 2.5, 1.0 - 1e-6) - gauss_value(0.5, 1.2, 2.5)) <
          1e-4);
}

TEST_CASE("2F1 value at t=1") {
    CHECK(hyp2f1(0.5, 0.5, 2.0, 1.0) ==
          doctest::Approx(1.2732395447351627).epsilon(1e-13));  // 4/pi
    CHECK(gauss_value(1.0, 1.0, 3.0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK_THROWS_AS(gauss_value(1.0, 1.0, 2.0), domain_error);
    CHECK_THROWS_AS(hyp2f1(2.0, 2.0, 3.0, 1.0), domain_error);
}

TEST_CASE("2F1 derivative") {
    // F(1,1;2;t) = -log(1-t)/t, so F'(0.5) = (1 + log(0.5)) * 4.
    double expected = (1.0 + std::log(0.5)) * 4.0;
    CHECK(hyp2f1_derivative(1.0, 1.0, 2.0, 0.5) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("transformation residuals distinguish the two variants") {
    auto [first, second] = euler_residuals(0.5, 1.2, 2.5, 0.7);
    CHECK(std::abs(first) < 1e-10);
    CHECK(std::abs(second) > 1e-3);
    // Second point, mixed-sign exponent c-a-b < 0.
    auto [f2, s2] = euler_residuals(1.4, 2.3, 2.1, 0.6);
    CHECK(std::abs(f2) < 1e-10);
    CHECK(std::abs(s2) > 1e-3);
}

TEST_CASE("2F1 domain and truncation failures") {
    CHECK_THROWS_AS(hyp2f1(1.0, 1.0, -2.0, 0.5), domain_error);
    CHECK_THROWS_AS(hyp2f1(1.0, 1.0, 2.0, 1.5), domain_error);
    CHECK_THROWS_AS(hyp2f1(1.0, 1.0, 2.0, -0.1), domain_error);
    SeriesControl tight;
    tight.max_terms = 5;
    try {
        hyp2f1(0.5, 0.5, 1.0, 0.9, tight);
        CHECK(false);
    } catch (const truncation_error& e) {
        CHECK(e.terms_used == 5);
        CHECK(e.tail_bound > 0.0);
        CHECK(e.last_increment > 0.0);
    }
}

TEST_CASE("polynomial cases terminate exactly") {
    // F(-2, b; c; t) = 1 - 2bt/c + b(b+1)t^2/(c(c+1)).
    double b = 1.3, c = 2.2, t = 0.97;
    double expect = 1.0 - 2.0 * b / c * t + b * (b + 1.0) / (c * (c + 1.0)) * t * t;
    CHECK(hyp2f1(-2.0, b, c, t) == doctest::Approx(expect).epsilon(1e-14));
}
