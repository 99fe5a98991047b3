#pragma once

#include <functional>
#include <string>
#include <vector>

#include "proxy_sa/errors.hpp"

namespace proxy_sa {

// One input's distribution: CDF F, density rho, quantile, open support, and
// the weight F(1-F)/rho^2 that appears in every bound and equality here.
//
// Records are immutable after construction; all member operations are pure.
class Marginal {
public:
    enum class Kind { Uniform, UserDefined };

    using Scalar1D = std::function<double(double)>;

    static Marginal uniform(double lo, double hi);

    // User-supplied cdf/pdf/quantile. Checked at registration on a grid of
    // 10^3 quantile-spaced interior points: cdf nondecreasing, pdf > 0,
    // quantile(cdf(x)) = x within 1e-12 relative.
    static Marginal user_defined(std::string name, double lo, double hi,
                                 Scalar1D cdf, Scalar1D pdf, Scalar1D quantile);

    Kind kind() const { return kind_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double width() const { return hi_ - lo_; }
    const std::string& name() const { return name_; }

    // F(x); clamps to 0 below the support and 1 above it.
    double cdf(double x) const;

    // rho(x); 0 outside the support.
    double pdf(double x) const;

    // Inverse CDF. Requires 0 < p < 1; the result is nudged strictly inside
    // the open support so downstream weight evaluations stay finite.
    double quantile(double p) const;

    // F(x)(1-F(x)) / rho(x)^2. Requires x strictly inside the support and
    // farther than 1e-12 (relative to a support scale) from either boundary;
    // otherwise raises SingularityError instead of returning infinity.
    double poincare_weight(double x) const;

    // Length scale for finite-difference steps: the support width when
    // finite, the interquartile range otherwise.
    double fd_scale() const;

    bool contains(double x) const { return x > lo_ && x < hi_; }

private:
    Marginal() = default;

    Kind kind_ = Kind::Uniform;
    double lo_ = 0.0;
    double hi_ = 1.0;
    std::string name_ = "uniform";
    Scalar1D user_cdf_, user_pdf_, user_quantile_;
};

// Ordered list of d mutually independent marginals.
struct InputSpace {
    std::vector<Marginal> marginals;

    InputSpace() = default;
    explicit InputSpace(std::vector<Marginal> m);

    int dimension() const { return static_cast<int>(marginals.size()); }
    const Marginal& marginal(int j) const { return marginals.at(static_cast<std::size_t>(j)); }

    static InputSpace uniform(double lo, double hi, int d);
};

// Free-function spellings used throughout the estimator formulas.
inline double cdf(const Marginal& m, double x) { return m.cdf(x); }
inline double pdf(const Marginal& m, double x) { return m.pdf(x); }
inline double quantile(const Marginal& m, double p) { return m.quantile(p); }
inline double poincare_weight(const Marginal& m, double x) { return m.poincare_weight(x); }

}  // namespace proxy_sa
