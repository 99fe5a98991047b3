#include "doctest.h"

#include <atomic>
#include <cmath>

#include "proxy_sa/differentiation.hpp"

using namespace proxy_sa;

namespace {

ModelSpec counting_model(std::atomic<int>* counter, int d, double lo, double hi,
                         std::function<double(const Eigen::VectorXd&)> f) {
    return make_model("counting", InputSpace::uniform(lo, hi, d), 1,
                      [counter, f](const Eigen::VectorXd& x) {
                          counter->fetch_add(1);
                          Eigen::VectorXd out(1);
                          out(0) = f(x);
                          return out;
                      });
}

}  // namespace

TEST_SUITE("differentiation") {

TEST_CASE("central difference is exact for quadratics") {
    std::atomic<int> n{0};
    const ModelSpec m =
        counting_model(&n, 1, -10, 10, [](const Eigen::VectorXd& x) { return x(0) * x(0); });
    Eigen::VectorXd x(1);
    x << 1.0;
    const FDScheme scheme;  // rel_step 1e-5
    CHECK(cross_partial_fd(m, IndexSubset::singleton(1), x, scheme)(0) ==
          doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("mixed partial is exact for the bilinear function") {
    std::atomic<int> n{0};
    const ModelSpec m =
        counting_model(&n, 2, -5, 5, [](const Eigen::VectorXd& x) { return x(0) * x(1); });
    Eigen::VectorXd x(2);
    x << 0.37, -1.2;
    // A step large enough that cancellation noise stays below the truncation-
    // free target; the stencil is exact for bilinear functions at any h.
    FDScheme scheme;
    scheme.rel_step = 1e-2;
    CHECK(cross_partial_fd(m, IndexSubset::of({1, 2}), x, scheme)(0) ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("ishigami derivative vanishes at the sin(2x) zero") {
    const ModelSpec m = builtin("ishigami");
    Eigen::VectorXd x(3);
    x << 0.0, M_PI_2, 0.0;
    CHECK(std::abs(cross_partial_fd(m, IndexSubset::singleton(2), x, FDScheme{})(0)) < 1e-6);
}

TEST_CASE("interior stencil cost is exactly 2^|u| evaluations") {
    std::atomic<int> n{0};
    const ModelSpec m = counting_model(&n, 3, 0, 1, [](const Eigen::VectorXd& x) {
        return std::sin(x(0)) * x(1) + x(2);
    });
    Eigen::VectorXd x = Eigen::VectorXd::Constant(3, 0.5);

    n = 0;
    (void)cross_partial_fd(m, IndexSubset::singleton(1), x, FDScheme{});
    CHECK(n.load() == 2);
    n = 0;
    (void)cross_partial_fd(m, IndexSubset::of({1, 2}), x, FDScheme{});
    CHECK(n.load() == 4);
    n = 0;
    (void)cross_partial_fd(m, IndexSubset::of({1, 2, 3}), x, FDScheme{});
    CHECK(n.load() == 8);
}

TEST_CASE("order cap raises a validation error") {
    std::atomic<int> n{0};
    const ModelSpec m =
        counting_model(&n, 4, 0, 1, [](const Eigen::VectorXd& x) { return x.sum(); });
    Eigen::VectorXd x = Eigen::VectorXd::Constant(4, 0.5);
    CHECK_THROWS_AS((void)cross_partial_fd(m, IndexSubset::of({1, 2, 3, 4}), x, FDScheme{}),
                    ValidationError);
}

TEST_CASE("central-difference error scales as h^2 on sin(kx)") {
    for (const double k : {1.0, 2.0, 3.0}) {
        std::atomic<int> n{0};
        const ModelSpec m = counting_model(
            &n, 1, -M_PI, M_PI, [k](const Eigen::VectorXd& x) { return std::sin(k * x(0)); });
        Eigen::VectorXd x(1);
        x << 0.4;

        // Steps well above the rounding floor so truncation dominates.
        FDScheme coarse;
        coarse.rel_step = 2e-3;
        FDScheme fine;
        fine.rel_step = 1e-3;
        const double exact = k * std::cos(k * x(0));
        const double e_coarse =
            std::abs(cross_partial_fd(m, IndexSubset::singleton(1), x, coarse)(0) - exact);
        const double e_fine =
            std::abs(cross_partial_fd(m, IndexSubset::singleton(1), x, fine)(0) - exact);
        const double ratio = e_coarse / e_fine;
        CHECK(ratio > 4.0 * 0.8);
        CHECK(ratio < 4.0 * 1.2);
    }
}

TEST_CASE("one-sided stencil takes over near the boundary") {
    std::atomic<int> n{0};
    const ModelSpec m =
        counting_model(&n, 1, 0, 1, [](const Eigen::VectorXd& x) { return x(0) * x(0); });
    FDScheme scheme;
    scheme.rel_step = 1e-4;
    Eigen::VectorXd x(1);
    x << 1e-6;  // closer to the boundary than the step
    n = 0;
    const double d = cross_partial_fd(m, IndexSubset::singleton(1), x, scheme)(0);
    CHECK(d == doctest::Approx(2e-6).epsilon(1e-4));
    CHECK(n.load() == 3);  // one-sided second-order stencil
}

TEST_CASE("clip-sample policy surfaces a domain error with the coordinate") {
    std::atomic<int> n{0};
    const ModelSpec m =
        counting_model(&n, 2, 0, 1, [](const Eigen::VectorXd& x) { return x.sum(); });
    FDScheme scheme;
    scheme.boundary = FDScheme::BoundaryPolicy::ClipSample;
    scheme.rel_step = 1e-4;
    Eigen::VectorXd x(2);
    x << 0.5, 1e-6;
    try {
        (void)cross_partial_fd(m, IndexSubset::of({1, 2}), x, scheme);
        FAIL("expected a domain error");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("x_2") != std::string::npos);
    }
}

TEST_CASE("partial_stack prefers analytic derivatives and can be forced to FD") {
    const ModelSpec m = builtin("ishigami");
    const SampleMatrix samples = transform(sobol_points(32, 3, 1), m.space);

    const DerivativeStack easy = partial_stack(m, IndexSubset::singleton(1), samples, FDScheme{});
    CHECK(easy.source == DerivativeStack::Source::Analytic);

    const DerivativeStack forced = partial_stack(m, IndexSubset::singleton(1), samples, FDScheme{},
                                                 DerivativeMode::FiniteDifference);
    CHECK(forced.source == DerivativeStack::Source::FiniteDifference);
    CHECK((easy.values - forced.values).cwiseAbs().maxCoeff() < 1e-6);

    // Zero cross term: all-zero stack through both routes.
    const DerivativeStack zero = partial_stack(m, IndexSubset::of({1, 2}), samples, FDScheme{});
    CHECK(zero.values.cwiseAbs().maxCoeff() == 0.0);
    const DerivativeStack zero_fd = partial_stack(m, IndexSubset::of({1, 2}), samples, FDScheme{},
                                                  DerivativeMode::FiniteDifference);
    CHECK(zero_fd.values.cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("partial_stack falls back to FD when the analytic form is missing") {
    const ModelSpec m = builtin("gsobol_mv");
    const SampleMatrix samples = transform(sobol_points(16, 10, 1), m.space);
    const DerivativeStack pair = partial_stack(m, IndexSubset::of({1, 2}), samples, FDScheme{});
    CHECK(pair.source == DerivativeStack::Source::FiniteDifference);
    CHECK_THROWS_AS((void)partial_stack(m, IndexSubset::of({1, 2}), samples, FDScheme{},
                                        DerivativeMode::Analytic),
                    CapabilityError);
}

TEST_CASE("constant model yields an all-zero stack") {
    std::atomic<int> n{0};
    const ModelSpec m = counting_model(&n, 2, 0, 1, [](const Eigen::VectorXd&) { return 3.5; });
    const SampleMatrix samples = transform(sobol_points(16, 2, 1), m.space);
    const DerivativeStack s = partial_stack(m, IndexSubset::singleton(1), samples, FDScheme{});
    CHECK(s.values.cwiseAbs().maxCoeff() < 1e-9);
}

}  // TEST_SUITE
