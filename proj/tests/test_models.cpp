#include "doctest.h"

#include <cmath>

#include "proxy_sa/differentiation.hpp"
#include "proxy_sa/models.hpp"
#include "proxy_sa/sampling.hpp"

using namespace proxy_sa;

namespace {

Eigen::VectorXd vec3(double a, double b, double c) {
    Eigen::VectorXd v(3);
    v << a, b, c;
    return v;
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("index subsets") {
    CHECK(IndexSubset::of({1, 3}).to_string() == "1:3");
    CHECK(IndexSubset::parse("1:3") == IndexSubset::of({1, 3}));
    CHECK(IndexSubset::parse("2,3") == IndexSubset::of({2, 3}));
    CHECK(IndexSubset::of({2}).is_subset_of(IndexSubset::of({1, 2, 3})));
    CHECK_THROWS_AS(IndexSubset::of({2, 2}), ValidationError);
    CHECK_THROWS_AS(IndexSubset::of({0}), ValidationError);
    CHECK_THROWS_AS(IndexSubset(std::vector<int>{}), ValidationError);
}

TEST_CASE("ishigami point values") {
    const ModelSpec m = builtin("ishigami");
    CHECK(evaluate(m, vec3(0, 0, 0))(0) == doctest::Approx(0.0).scale(1));
    CHECK(evaluate(m, vec3(M_PI_2, 0, 0))(0) == doctest::Approx(1.0));
}

TEST_CASE("ishigami_mv point values") {
    const ModelSpec m = builtin("ishigami_mv");
    const Eigen::VectorXd y = evaluate(m, vec3(M_PI_2, 0, 0));
    REQUIRE(y.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(y(k) == doctest::Approx(1.0));
}

TEST_CASE("gsobol at the midpoint") {
    const ModelSpec m = builtin("gsobol_mv");
    Eigen::VectorXd x = Eigen::VectorXd::Constant(10, 0.5);
    const Eigen::VectorXd y = evaluate(m, x);
    // |4*0.5-2| = 0, so output 4 is (50/51)^10; computed by plain repeated
    // multiplication as an independent check.
    double expected = 1.0;
    for (int i = 0; i < 10; ++i) expected *= 50.0 / 51.0;
    CHECK(y(3) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(y(0) == doctest::Approx(0.0).scale(1));  // A[0,0] = 0 makes the first factor 0
}

TEST_CASE("block_additive at the origin") {
    const ModelSpec m = builtin("block_additive");
    const Eigen::VectorXd y = evaluate(m, Eigen::VectorXd::Zero(6));
    CHECK(y(0) == doctest::Approx(std::cos(-0.8) + std::sin(0.5)).epsilon(1e-14));
}

TEST_CASE("cdf_product evaluation and partials") {
    const ModelSpec m = builtin("cdf_product");  // a = (1,1), b = (0,0) on uniform(0,1)^2
    Eigen::VectorXd x(2);
    x << 0.3, 0.6;
    CHECK(evaluate(m, x)(0) == doctest::Approx(0.18));
    // d f / dx_1 = rho_1 * F_2 = 0.6 at this point.
    CHECK(analytic_partial(m, IndexSubset::singleton(1), x)(0) == doctest::Approx(0.6));
    // With every F_i = 0.5: a_j rho_j prod_{i != j} (a_i F_i + b_i).
    Eigen::VectorXd half(2);
    half << 0.5, 0.5;
    CHECK(analytic_partial(m, IndexSubset::singleton(1), half)(0) == doctest::Approx(0.5));
    CHECK(analytic_partial(m, IndexSubset::of({1, 2}), half)(0) == doctest::Approx(1.0));
}

TEST_CASE("ishigami analytic cross-partials") {
    const ModelSpec m = builtin("ishigami");
    CHECK(analytic_partial(m, IndexSubset::of({1, 2}), vec3(0.3, -0.8, 2.0))(0) == 0.0);
    CHECK(analytic_partial(m, IndexSubset::of({2, 3}), vec3(0.3, -0.8, 2.0))(0) == 0.0);
    CHECK(analytic_partial(m, IndexSubset::of({1, 3}), vec3(0, 0, 1))(0) == doctest::Approx(0.4));
}

TEST_CASE("block cross-partials across blocks vanish exactly") {
    const ModelSpec m = builtin("block_additive");
    Eigen::VectorXd x = Eigen::VectorXd::Constant(6, 0.21);
    CHECK(analytic_partial(m, IndexSubset::of({1, 2}), x)(0) == 0.0);
    CHECK(analytic_partial(m, IndexSubset::of({3, 6}), x)(0) == 0.0);
    CHECK(analytic_partial(m, IndexSubset::of({1, 3}), x)(0) != 0.0);
}

TEST_CASE("unknown model name raises a lookup error") {
    CHECK_THROWS_AS((void)builtin("sinus_of_doom"), ValidationError);
}

TEST_CASE("evaluation outside the support raises a domain error") {
    const ModelSpec m = builtin("ishigami");
    CHECK_THROWS_AS((void)evaluate(m, vec3(4.0, 0, 0)), std::domain_error);
}

TEST_CASE("gsobol analytic partials cover singletons only") {
    const ModelSpec m = builtin("gsobol_mv");
    Eigen::VectorXd x = Eigen::VectorXd::Constant(10, 0.3);
    CHECK_NOTHROW((void)analytic_partial(m, IndexSubset::singleton(2), x));
    CHECK_THROWS_AS((void)analytic_partial(m, IndexSubset::of({1, 2}), x), CapabilityError);
}

TEST_CASE("analytic partials agree with finite differences at QMC points") {
    const FDScheme scheme;
    for (const char* name : {"ishigami", "ishigami_mv", "block_additive", "cdf_product"}) {
        const ModelSpec model = builtin(name);
        const SampleMatrix pts = transform(sobol_points(100, model.d, 1), model.space);
        std::vector<IndexSubset> subsets;
        for (int j = 1; j <= model.d; ++j) subsets.push_back(IndexSubset::singleton(j));
        for (int j = 1; j <= model.d; ++j) {
            for (int k = j + 1; k <= model.d; ++k) subsets.push_back(IndexSubset::of({j, k}));
        }
        for (const IndexSubset& u : subsets) {
            for (int i = 0; i < pts.m(); ++i) {
                const Eigen::VectorXd x = pts.values.row(i).transpose();
                const Eigen::VectorXd a = analytic_partial(model, u, x);
                const Eigen::VectorXd fd = cross_partial_fd(model, u, x, scheme);
                const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
                CHECK((a - fd).cwiseAbs().maxCoeff() / scale < 1e-5);
            }
        }
    }
}

TEST_CASE("gsobol analytic singleton partials agree with FD away from the kink") {
    const ModelSpec model = builtin("gsobol_mv");
    const FDScheme scheme;
    const SampleMatrix pts = transform(sobol_points(100, model.d, 1), model.space);
    for (int j = 1; j <= model.d; ++j) {
        for (int i = 0; i < pts.m(); ++i) {
            Eigen::VectorXd x = pts.values.row(i).transpose();
            if (std::abs(x(j - 1) - 0.5) < 1e-3) continue;  // FD straddles the kink there
            const Eigen::VectorXd a = analytic_partial(model, IndexSubset::singleton(j), x);
            const Eigen::VectorXd fd = cross_partial_fd(model, IndexSubset::singleton(j), x, scheme);
            const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
            CHECK((a - fd).cwiseAbs().maxCoeff() / scale < 1e-5);
        }
    }
}

TEST_CASE("interaction sets ship with block_additive") {
    const ModelSpec m = builtin("block_additive");
    REQUIRE(m.interaction_sets.has_value());
    const auto& a1 = (*m.interaction_sets)[0];
    CHECK(a1.size() == 4);  // {1}, {1,3}, {1,5}, {1,3,5}
    for (const IndexSubset& s : a1) CHECK(s.contains(1));
}

}  // TEST_SUITE
