#pragma once

#include <Eigen/Core>

#include <cstdint>

#include "proxy_sa/marginals.hpp"

namespace proxy_sa {

enum class Generator { Sobol, Prng };

// m x d point set on the open unit hypercube; every entry is strictly inside
// (0,1) so the quantile transform never lands on a support boundary.
struct UnitSample {
    Eigen::MatrixXd points;  // m x d
    Generator generator = Generator::Prng;
    std::uint64_t seed_or_skip = 0;

    int m() const { return static_cast<int>(points.rows()); }
    int d() const { return static_cast<int>(points.cols()); }
};

// Sample transported to the input space by the inverse CDF, column j inside
// the open support of marginal j.
struct SampleMatrix {
    Eigen::MatrixXd values;  // m x d
    InputSpace space;

    int m() const { return static_cast<int>(values.rows()); }
    int d() const { return static_cast<int>(values.cols()); }
};

// Deterministic replication ladder: replicate r draws from the sub-seed
// obtained by r+1 splitmix64 steps from base_seed. Distinct replicate
// indices give distinct, well-mixed generator states.
struct SeedPolicy {
    std::uint64_t base_seed = 0;
    int replicate_index = 0;

    std::uint64_t stream_seed() const;
};

// Largest dimension covered by the built-in direction-number table.
inline constexpr int kSobolMaxDimension = 32;

// First m points of the (natural-order) Sobol sequence after discarding
// `skip` points; index 0 is the all-zeros point, whose coordinates are
// replaced by the next representable value above 0.
UnitSample sobol_points(int m, int d, std::uint64_t skip);

// Seeded pseudo-random points, bitwise reproducible for identical inputs.
UnitSample prng_points(int m, int d, const SeedPolicy& seed);

// values[i][j] = quantile(marginal_j, unit.points[i][j]).
SampleMatrix transform(const UnitSample& unit, const InputSpace& space);

}  // namespace proxy_sa
