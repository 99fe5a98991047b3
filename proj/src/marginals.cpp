#include "proxy_sa/marginals.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace proxy_sa {

namespace {

bool finite_support(double lo, double hi) {
    return std::isfinite(lo) && std::isfinite(hi);
}

}  // namespace

Marginal Marginal::uniform(double lo, double hi) {
    if (!(lo < hi) || !finite_support(lo, hi)) {
        throw ValidationError("uniform marginal requires finite lo < hi");
    }
    Marginal m;
    m.kind_ = Kind::Uniform;
    m.lo_ = lo;
    m.hi_ = hi;
    std::ostringstream os;
    os << "uniform(" << lo << "," << hi << ")";
    m.name_ = os.str();
    return m;
}

Marginal Marginal::user_defined(std::string name, double lo, double hi,
                                Scalar1D cdf_fn, Scalar1D pdf_fn, Scalar1D quantile_fn) {
    if (!(lo < hi)) throw ValidationError("user marginal requires lo < hi");
    if (!cdf_fn || !pdf_fn || !quantile_fn) {
        throw ValidationError("user marginal requires cdf, pdf and quantile callables");
    }
    Marginal m;
    m.kind_ = Kind::UserDefined;
    m.lo_ = lo;
    m.hi_ = hi;
    m.name_ = std::move(name);
    m.user_cdf_ = std::move(cdf_fn);
    m.user_pdf_ = std::move(pdf_fn);
    m.user_quantile_ = std::move(quantile_fn);

    // Registration check on 10^3 quantile-spaced interior points.
    const int grid = 1000;
    double prev_cdf = 0.0;
    for (int k = 1; k <= grid; ++k) {
        const double p = static_cast<double>(k) / (grid + 1);
        const double x = m.user_quantile_(p);
        if (!(x > lo && x < hi)) {
            throw ValidationError(m.name_ + ": quantile(" + std::to_string(p) +
                                  ") leaves the open support");
        }
        const double c = m.user_cdf_(x);
        if (c + 1e-12 < prev_cdf) {
            throw ValidationError(m.name_ + ": cdf is decreasing near x=" + std::to_string(x));
        }
        prev_cdf = c;
        if (!(m.user_pdf_(x) > 0.0)) {
            throw ValidationError(m.name_ + ": pdf is not positive at x=" + std::to_string(x));
        }
        const double back = m.user_quantile_(c);
        const double scale = std::max({std::abs(x), std::abs(back), 1e-300});
        if (std::abs(back - x) > 1e-12 * scale + 1e-14) {
            throw ValidationError(m.name_ + ": quantile(cdf(x)) != x at x=" + std::to_string(x));
        }
    }
    return m;
}

double Marginal::cdf(double x) const {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    if (kind_ == Kind::Uniform) return (x - lo_) / (hi_ - lo_);
    const double c = user_cdf_(x);
    return std::min(1.0, std::max(0.0, c));
}

double Marginal::pdf(double x) const {
    if (x <= lo_ || x >= hi_) return 0.0;
    if (kind_ == Kind::Uniform) return 1.0 / (hi_ - lo_);
    return user_pdf_(x);
}

double Marginal::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("quantile requires 0 < p < 1, got " + std::to_string(p));
    }
    double x;
    if (kind_ == Kind::Uniform) {
        x = lo_ + p * (hi_ - lo_);
    } else {
        x = user_quantile_(p);
    }
    // Keep the result strictly inside the open support even when p is within
    // one ulp of 0 or 1.
    if (x <= lo_) x = std::nextafter(lo_, hi_);
    if (x >= hi_) x = std::nextafter(hi_, lo_);
    return x;
}

double Marginal::poincare_weight(double x) const {
    const double scale = finite_support(lo_, hi_) ? width() : std::max(1.0, std::abs(x));
    if (std::isfinite(lo_) && x - lo_ < 1e-12 * scale) {
        throw SingularityError(name_ + ": weight singular at x=" + std::to_string(x) +
                               " (lower support boundary)");
    }
    if (std::isfinite(hi_) && hi_ - x < 1e-12 * scale) {
        throw SingularityError(name_ + ": weight singular at x=" + std::to_string(x) +
                               " (upper support boundary)");
    }
    if (kind_ == Kind::Uniform) {
        // F(1-F)/rho^2 = (x-lo)(hi-x) for the uniform family.
        return (x - lo_) * (hi_ - x);
    }
    const double rho = pdf(x);
    if (!(rho > 0.0)) {
        throw SingularityError(name_ + ": weight singular, pdf vanishes at x=" + std::to_string(x));
    }
    const double F = cdf(x);
    return F * (1.0 - F) / (rho * rho);
}

double Marginal::fd_scale() const {
    if (finite_support(lo_, hi_)) return width();
    return quantile(0.75) - quantile(0.25);
}

InputSpace::InputSpace(std::vector<Marginal> m) : marginals(std::move(m)) {
    if (marginals.empty()) throw ValidationError("InputSpace requires d >= 1");
}

InputSpace InputSpace::uniform(double lo, double hi, int d) {
    if (d < 1) throw ValidationError("InputSpace requires d >= 1");
    std::vector<Marginal> ms;
    ms.reserve(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) ms.push_back(Marginal::uniform(lo, hi));
    return InputSpace(std::move(ms));
}

}  // namespace proxy_sa
