#include "proxy_sa/sampling.hpp"

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "proxy_sa/errors.hpp"

namespace proxy_sa {

namespace {

constexpr int kBits = 32;

// Primitive polynomials and initial direction numbers for dimensions 2..32,
// from Joe & Kuo's "new-joe-kuo-6" table (dimension 1 is the plain radical
// inverse in base 2 and needs no entry).
struct SobolRow {
    int s;
    std::uint32_t a;
    std::array<std::uint32_t, 7> m;
};

constexpr std::array<SobolRow, 31> kJoeKuo = {{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
    {6, 19, {1, 1, 1, 15, 7, 5}},
    {6, 22, {1, 3, 1, 15, 13, 25}},
    {6, 25, {1, 1, 5, 5, 19, 61}},
    {7, 1, {1, 3, 7, 11, 23, 15, 103}},
    {7, 4, {1, 3, 7, 13, 13, 15, 69}},
    {7, 7, {1, 1, 3, 13, 7, 35, 63}},
    {7, 8, {1, 3, 5, 9, 1, 25, 53}},
    {7, 14, {1, 3, 1, 13, 9, 35, 107}},
    {7, 19, {1, 3, 1, 5, 27, 61, 31}},
    {7, 21, {1, 1, 5, 11, 19, 41, 61}},
    {7, 28, {1, 3, 5, 3, 3, 13, 69}},
    {7, 31, {1, 1, 7, 13, 1, 19, 1}},
    {7, 32, {1, 3, 7, 5, 13, 19, 59}},
    {7, 37, {1, 1, 3, 9, 25, 29, 41}},
    {7, 41, {1, 3, 5, 13, 23, 1, 55}},
    {7, 42, {1, 3, 7, 3, 13, 59, 17}},
}};

// Direction integers V[0..31] for one dimension (1-based dim index), each an
// unsigned 32-bit value with implicit scale 2^-32.
std::array<std::uint32_t, kBits> direction_vectors(int dim) {
    std::array<std::uint32_t, kBits> v{};
    if (dim == 1) {
        for (int k = 0; k < kBits; ++k) v[k] = 1u << (kBits - 1 - k);
        return v;
    }
    const SobolRow& row = kJoeKuo[static_cast<std::size_t>(dim - 2)];
    const int s = row.s;
    for (int i = 0; i < s; ++i) v[i] = row.m[static_cast<std::size_t>(i)] << (kBits - 1 - i);
    for (int i = s; i < kBits; ++i) {
        std::uint32_t val = v[i - s] ^ (v[i - s] >> s);
        for (int k = 1; k < s; ++k) {
            if ((row.a >> (s - 1 - k)) & 1u) val ^= v[i - k];
        }
        v[i] = val;
    }
    return v;
}

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += kGamma);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t SeedPolicy::stream_seed() const {
    std::uint64_t state = base_seed;
    std::uint64_t out = 0;
    for (int i = 0; i <= replicate_index; ++i) out = splitmix64(state);
    return out;
}

UnitSample sobol_points(int m, int d, std::uint64_t skip) {
    if (m < 1 || d < 1) throw ValidationError("sobol_points requires m >= 1 and d >= 1");
    if (d > kSobolMaxDimension) {
        throw CapabilityError("sobol_points: dimension " + std::to_string(d) +
                              " exceeds the direction-number table limit " +
                              std::to_string(kSobolMaxDimension));
    }
    if (skip + static_cast<std::uint64_t>(m) > (1ULL << kBits)) {
        throw CapabilityError("sobol_points: sequence index exceeds 2^32");
    }

    std::vector<std::array<std::uint32_t, kBits>> dirs;
    dirs.reserve(static_cast<std::size_t>(d));
    for (int j = 1; j <= d; ++j) dirs.push_back(direction_vectors(j));

    UnitSample out;
    out.generator = Generator::Sobol;
    out.seed_or_skip = skip;
    out.points.resize(m, d);
    const double scale = std::ldexp(1.0, -kBits);
    const double tiny = std::nextafter(0.0, 1.0);
    for (int i = 0; i < m; ++i) {
        const std::uint64_t n = skip + static_cast<std::uint64_t>(i);
        for (int j = 0; j < d; ++j) {
            std::uint32_t x = 0;
            std::uint64_t bits = n;
            int k = 0;
            while (bits) {
                if (bits & 1u) x ^= dirs[static_cast<std::size_t>(j)][k];
                bits >>= 1;
                ++k;
            }
            const double u = static_cast<double>(x) * scale;
            out.points(i, j) = (u == 0.0) ? tiny : u;
        }
    }
    return out;
}

UnitSample prng_points(int m, int d, const SeedPolicy& seed) {
    if (m < 1 || d < 1) throw ValidationError("prng_points requires m >= 1 and d >= 1");
    std::mt19937_64 rng(seed.stream_seed());
    UnitSample out;
    out.generator = Generator::Prng;
    out.seed_or_skip = seed.base_seed;
    out.points.resize(m, d);
    const double scale = std::ldexp(1.0, -53);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < d; ++j) {
            // 53-bit integer k mapped to (k + 1/2) * 2^-53, strictly in (0,1).
            const std::uint64_t k = rng() >> 11;
            out.points(i, j) = (static_cast<double>(k) + 0.5) * scale;
        }
    }
    return out;
}

SampleMatrix transform(const UnitSample& unit, const InputSpace& space) {
    if (unit.d() != space.dimension()) {
        throw ShapeError("transform: unit sample has d=" + std::to_string(unit.d()) +
                         " but the input space has d=" + std::to_string(space.dimension()));
    }
    SampleMatrix out;
    out.space = space;
    out.values.resize(unit.m(), unit.d());
    for (int j = 0; j < unit.d(); ++j) {
        const Marginal& mj = space.marginal(j);
        for (int i = 0; i < unit.m(); ++i) {
            out.values(i, j) = mj.quantile(unit.points(i, j));
        }
    }
    return out;
}

}  // namespace proxy_sa
