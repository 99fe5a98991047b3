#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "proxy_sa/sampling.hpp"

using namespace proxy_sa;

namespace {

// Independent oracle for dimension 1: the base-2 radical inverse of n.
double radical_inverse_base2(std::uint64_t n) {
    double inv = 0.0, base = 0.5;
    while (n) {
        if (n & 1) inv += base;
        n >>= 1;
        base *= 0.5;
    }
    return inv;
}

// Box-counting discrepancy proxy: max |count/m - volume| over anchored boxes
// [0, q) with q drawn from a fixed stream.
double discrepancy_proxy(const Eigen::MatrixXd& pts, int boxes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int m = static_cast<int>(pts.rows());
    const int d = static_cast<int>(pts.cols());
    double worst = 0.0;
    for (int b = 0; b < boxes; ++b) {
        std::vector<double> q(d);
        double volume = 1.0;
        for (int j = 0; j < d; ++j) {
            q[j] = unif(rng);
            volume *= q[j];
        }
        int count = 0;
        for (int i = 0; i < m; ++i) {
            bool inside = true;
            for (int j = 0; j < d; ++j) {
                if (pts(i, j) >= q[j]) {
                    inside = false;
                    break;
                }
            }
            count += inside ? 1 : 0;
        }
        worst = std::max(worst, std::abs(count / static_cast<double>(m) - volume));
    }
    return worst;
}

}  // namespace

TEST_SUITE("sampling") {

TEST_CASE("dimension-1 sobol points are the radical-inverse sequence") {
    const UnitSample s = sobol_points(3, 1, 1);
    CHECK(s.points(0, 0) == radical_inverse_base2(1));
    CHECK(s.points(1, 0) == radical_inverse_base2(2));
    CHECK(s.points(2, 0) == radical_inverse_base2(3));
    for (int n = 1; n < 64; ++n) {
        const UnitSample t = sobol_points(1, 1, static_cast<std::uint64_t>(n));
        CHECK(t.points(0, 0) == radical_inverse_base2(static_cast<std::uint64_t>(n)));
    }
}

TEST_CASE("sobol points match an independent reference at d = 6") {
    // Natural-order points n = 1..8 from a separate implementation of the
    // same published direction numbers.
    const double expected[8][6] = {
        {0.5000000000, 0.5000000000, 0.5000000000, 0.5000000000, 0.5000000000, 0.5000000000},
        {0.2500000000, 0.7500000000, 0.7500000000, 0.7500000000, 0.2500000000, 0.2500000000},
        {0.7500000000, 0.2500000000, 0.2500000000, 0.2500000000, 0.7500000000, 0.7500000000},
        {0.1250000000, 0.6250000000, 0.3750000000, 0.1250000000, 0.1250000000, 0.3750000000},
        {0.6250000000, 0.1250000000, 0.8750000000, 0.6250000000, 0.6250000000, 0.8750000000},
        {0.3750000000, 0.3750000000, 0.6250000000, 0.8750000000, 0.3750000000, 0.1250000000},
        {0.8750000000, 0.8750000000, 0.1250000000, 0.3750000000, 0.8750000000, 0.6250000000},
        {0.0625000000, 0.9375000000, 0.5625000000, 0.3125000000, 0.6875000000, 0.1875000000},
    };
    const UnitSample s = sobol_points(8, 6, 1);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 6; ++j) {
            CHECK(s.points(i, j) == doctest::Approx(expected[i][j]).epsilon(0).scale(1));
        }
    }
}

TEST_CASE("sobol beats prng on the box-count discrepancy proxy") {
    const UnitSample sobol = sobol_points(1024, 6, 0);
    const double d_sobol = discrepancy_proxy(sobol.points, 1 << 12, 777);

    std::vector<double> d_prng;
    for (int s = 0; s < 20; ++s) {
        const UnitSample p = prng_points(1024, 6, SeedPolicy{static_cast<std::uint64_t>(s), 0});
        d_prng.push_back(discrepancy_proxy(p.points, 1 << 12, 777));
    }
    std::sort(d_prng.begin(), d_prng.end());
    const double median = 0.5 * (d_prng[9] + d_prng[10]);
    CHECK(d_sobol < median);
}

TEST_CASE("single sobol point lies strictly inside the cube") {
    const UnitSample s = sobol_points(1, 3, 0);  // the all-zeros index
    for (int j = 0; j < 3; ++j) {
        CHECK(s.points(0, j) > 0.0);
        CHECK(s.points(0, j) < 1.0);
    }
}

TEST_CASE("sobol dimension cap") {
    CHECK_NOTHROW((void)sobol_points(4, kSobolMaxDimension, 0));
    CHECK_THROWS_AS((void)sobol_points(4, kSobolMaxDimension + 1, 0), CapabilityError);
}

TEST_CASE("prng determinism and stream separation") {
    const SeedPolicy seed{123456789ULL, 0};
    const UnitSample a = prng_points(50, 4, seed);
    const UnitSample b = prng_points(50, 4, seed);
    CHECK((a.points - b.points).cwiseAbs().maxCoeff() == 0.0);

    const UnitSample c = prng_points(50, 4, SeedPolicy{123456789ULL, 1});
    CHECK((a.points.row(0) - c.points.row(0)).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("prng sample mean obeys the law-of-large-numbers band") {
    const int m = 100000;
    const UnitSample s = prng_points(m, 1, SeedPolicy{2024, 0});
    const double mean = s.points.col(0).mean();
    const double half_width = 3.0 / std::sqrt(12.0 * m);
    CHECK(mean > 0.5 - half_width);
    CHECK(mean < 0.5 + half_width);
}

TEST_CASE("prng points are strictly inside (0,1)") {
    const UnitSample s = prng_points(4096, 3, SeedPolicy{7, 3});
    CHECK(s.points.minCoeff() > 0.0);
    CHECK(s.points.maxCoeff() < 1.0);
}

TEST_CASE("transform maps medians to midpoints") {
    UnitSample unit;
    unit.points = Eigen::MatrixXd::Constant(1, 3, 0.5);
    const SampleMatrix x = transform(unit, InputSpace::uniform(-M_PI, M_PI, 3));
    for (int j = 0; j < 3; ++j) CHECK(x.values(0, j) == doctest::Approx(0.0).scale(1));

    UnitSample u2;
    u2.points = Eigen::MatrixXd::Constant(1, 1, 0.25);
    CHECK(transform(u2, InputSpace::uniform(0, 1, 1)).values(0, 0) == doctest::Approx(0.25));
    for (double p : {0.1, 0.9}) {
        UnitSample u3;
        u3.points = Eigen::MatrixXd::Constant(1, 1, p);
        CHECK(transform(u3, InputSpace::uniform(2, 4, 1)).values(0, 0) ==
              doctest::Approx(2.0 + 2.0 * p));
    }
}

TEST_CASE("transform dimension mismatch raises a shape error") {
    UnitSample unit;
    unit.points = Eigen::MatrixXd::Constant(2, 3, 0.5);
    CHECK_THROWS_AS((void)transform(unit, InputSpace::uniform(0, 1, 2)), ShapeError);
}

TEST_CASE("cdf recovers the unit sample after transform") {
    const InputSpace space = InputSpace::uniform(-2.5, 1.75, 4);
    const UnitSample unit = sobol_points(256, 4, 0);
    const SampleMatrix x = transform(unit, space);
    for (int i = 0; i < unit.m(); ++i) {
        for (int j = 0; j < 4; ++j) {
            const double back = space.marginal(j).cdf(x.values(i, j));
            CHECK(std::abs(back - unit.points(i, j)) < 1e-12);
            CHECK(x.values(i, j) > space.marginal(j).lo());
            CHECK(x.values(i, j) < space.marginal(j).hi());
        }
    }
}

}  // TEST_SUITE
