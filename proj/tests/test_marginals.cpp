#include "doctest.h"

#include <cmath>

#include "proxy_sa/gauss_legendre.hpp"
#include "proxy_sa/marginals.hpp"

using namespace proxy_sa;

TEST_SUITE("marginals") {

TEST_CASE("uniform cdf values and clamping") {
    const Marginal m = Marginal::uniform(-M_PI, M_PI);
    CHECK(m.cdf(0.0) == doctest::Approx(0.5));
    CHECK(Marginal::uniform(0, 1).cdf(0.25) == doctest::Approx(0.25));
    CHECK(Marginal::uniform(-1, 1).cdf(2.0) == 1.0);
    CHECK(Marginal::uniform(-1, 1).cdf(-2.0) == 0.0);
}

TEST_CASE("uniform pdf values") {
    CHECK(Marginal::uniform(-M_PI, M_PI).pdf(0.0) == doctest::Approx(1.0 / (2.0 * M_PI)));
    CHECK(Marginal::uniform(0, 1).pdf(0.7) == doctest::Approx(1.0));
    CHECK(Marginal::uniform(0, 1).pdf(-0.1) == 0.0);
}

TEST_CASE("uniform quantile values and domain errors") {
    CHECK(Marginal::uniform(0, 1).quantile(0.5) == doctest::Approx(0.5));
    CHECK(Marginal::uniform(-M_PI, M_PI).quantile(0.25) == doctest::Approx(-M_PI / 2));
    CHECK(Marginal::uniform(2, 4).quantile(0.75) == doctest::Approx(3.5));
    CHECK_THROWS_AS((void)Marginal::uniform(0, 1).quantile(0.0), std::domain_error);
    CHECK_THROWS_AS((void)Marginal::uniform(0, 1).quantile(1.0), std::domain_error);
    CHECK_THROWS_AS((void)Marginal::uniform(0, 1).quantile(-0.2), std::domain_error);
}

TEST_CASE("poincare weight values") {
    CHECK(Marginal::uniform(-M_PI, M_PI).poincare_weight(0.0) ==
          doctest::Approx(M_PI * M_PI).epsilon(1e-12));
    CHECK(Marginal::uniform(0, 1).poincare_weight(0.5) == doctest::Approx(0.25));
}

TEST_CASE("weight raises a singularity error at the boundary") {
    const Marginal m = Marginal::uniform(0, 1);
    CHECK_THROWS_AS((void)m.poincare_weight(0.0), SingularityError);
    CHECK_THROWS_AS((void)m.poincare_weight(1.0), SingularityError);
    CHECK_THROWS_AS((void)m.poincare_weight(1.0 - 1e-15), SingularityError);
    CHECK_THROWS_AS((void)m.poincare_weight(1.5), SingularityError);
}

TEST_CASE("cdf(1-cdf) never exceeds 1/4") {
    for (const Marginal& m : {Marginal::uniform(0, 1), Marginal::uniform(-3, 7)}) {
        for (int k = 1; k <= 1000; ++k) {
            const double x = m.quantile(k / 1001.0);
            const double p = m.cdf(x) * (1.0 - m.cdf(x));
            CHECK(p >= 0.0);
            CHECK(p <= 0.25 + 1e-15);
        }
    }
}

TEST_CASE("quantile of cdf is the identity on a 10^3 grid") {
    const Marginal m = Marginal::uniform(-M_PI, M_PI);
    for (int k = 1; k <= 1000; ++k) {
        const double x = m.quantile(k / 1001.0);
        CHECK(m.quantile(m.cdf(x)) == doctest::Approx(x).epsilon(1e-12));
    }
}

TEST_CASE("expectation of the weight under uniform(0,1) is 1/6") {
    // 1024-point Gauss-Legendre of x(1-x) over (0,1).
    const Marginal m = Marginal::uniform(0, 1);
    const QuadratureRule rule = gauss_legendre_unit(1024);
    double acc = 0.0;
    for (int i = 0; i < rule.size(); ++i) {
        acc += rule.weights[i] * m.poincare_weight(rule.nodes[i]);
    }
    CHECK(acc == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
}

TEST_CASE("user-defined marginal passes registration and reproduces uniform") {
    const Marginal m = Marginal::user_defined(
        "user_uniform", 0.0, 2.0, [](double x) { return x / 2.0; }, [](double) { return 0.5; },
        [](double p) { return 2.0 * p; });
    CHECK(m.cdf(0.5) == doctest::Approx(0.25));
    CHECK(m.poincare_weight(1.0) == doctest::Approx(1.0));  // F(1-F)/rho^2 = 0.25/0.25
}

TEST_CASE("user-defined registration rejects inconsistent callables") {
    // quantile inconsistent with cdf
    CHECK_THROWS_AS(Marginal::user_defined(
                        "bad", 0.0, 1.0, [](double x) { return x; }, [](double) { return 1.0; },
                        [](double p) { return 0.5 * p; }),
                    ValidationError);
    // vanishing density inside the support
    CHECK_THROWS_AS(Marginal::user_defined(
                        "bad2", 0.0, 1.0, [](double x) { return x; }, [](double) { return 0.0; },
                        [](double p) { return p; }),
                    ValidationError);
}

TEST_CASE("input space construction") {
    const InputSpace space = InputSpace::uniform(-1, 1, 6);
    CHECK(space.dimension() == 6);
    CHECK_THROWS_AS(InputSpace::uniform(0, 1, 0), ValidationError);
    CHECK_THROWS_AS(Marginal::uniform(1.0, 1.0), ValidationError);
}

}  // TEST_SUITE
