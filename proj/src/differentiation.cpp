#include "proxy_sa/differentiation.hpp"

#include <cmath>
#include <string>

#include "proxy_sa/errors.hpp"
#include "proxy_sa/parallel.hpp"

namespace proxy_sa {

namespace {

// Recursive nested differencing over the index list; each level consumes one
// index of u and differences the next level's value.
Eigen::VectorXd nested_fd(const ModelSpec& model, const std::vector<int>& idx, std::size_t level,
                          Eigen::VectorXd x, const FDScheme& scheme) {
    if (level == idx.size()) return model.evaluate_fn(x);

    const int j = idx[level] - 1;
    const Marginal& mj = model.space.marginal(j);
    const double h = scheme.rel_step * mj.fd_scale();
    const double xj = x(j);
    const bool fits_up = xj + h < mj.hi();
    const bool fits_down = xj - h > mj.lo();

    auto eval_at = [&](double value) {
        x(j) = value;
        Eigen::VectorXd out = nested_fd(model, idx, level + 1, x, scheme);
        x(j) = xj;
        return out;
    };

    if (fits_up && fits_down) {
        return (eval_at(xj + h) - eval_at(xj - h)) / (2.0 * h);
    }

    if (scheme.boundary == FDScheme::BoundaryPolicy::ClipSample) {
        throw std::domain_error(model.name + ": finite-difference stencil leaves the support at x_" +
                                std::to_string(j + 1) + " = " + std::to_string(xj) +
                                " (step " + std::to_string(h) + ")");
    }

    // One-sided second-order stencil on whichever side has room.
    if (fits_up) {
        return (-3.0 * eval_at(xj) + 4.0 * eval_at(xj + h) - eval_at(xj + 2.0 * h)) / (2.0 * h);
    }
    if (fits_down) {
        return (3.0 * eval_at(xj) - 4.0 * eval_at(xj - h) + eval_at(xj - 2.0 * h)) / (2.0 * h);
    }
    throw std::domain_error(model.name + ": support of x_" + std::to_string(j + 1) +
                            " is narrower than the finite-difference stencil");
}

}  // namespace

Eigen::VectorXd cross_partial_fd(const ModelSpec& model, const IndexSubset& u,
                                 const Eigen::VectorXd& x, const FDScheme& scheme) {
    if (u.size() > 3) {
        throw ValidationError("cross_partial_fd: |u| <= 3 (cost doubles per index)");
    }
    if (u.indices().back() > model.d) {
        throw ValidationError("cross_partial_fd: subset " + u.to_string() + " exceeds d");
    }
    if (!(scheme.rel_step > 0.0)) throw ValidationError("cross_partial_fd: rel_step must be > 0");
    for (int j = 0; j < model.d; ++j) {
        if (!model.space.marginal(j).contains(x(j))) {
            throw std::domain_error(model.name + ": differentiation point leaves the support at x_" +
                                    std::to_string(j + 1));
        }
    }
    return nested_fd(model, u.indices(), 0, x, scheme);
}

DerivativeStack partial_stack(const ModelSpec& model, const IndexSubset& u,
                              const SampleMatrix& samples, const FDScheme& scheme,
                              DerivativeMode mode) {
    DerivativeStack stack;
    stack.subset = u;
    stack.values.resize(samples.m(), model.n_out);

    bool use_analytic = false;
    if (mode != DerivativeMode::FiniteDifference && model.has_analytic_partials()) {
        if (samples.m() > 0) {
            try {
                // Probe the first row; a CapabilityError means this subset has
                // no closed form and the whole stack goes through FD.
                stack.values.row(0) =
                    analytic_partial(model, u, samples.values.row(0).transpose()).transpose();
                use_analytic = true;
            } catch (const CapabilityError&) {
                if (mode == DerivativeMode::Analytic) throw;
            }
        }
    } else if (mode == DerivativeMode::Analytic) {
        throw CapabilityError(model.name + ": no analytic cross-partials registered");
    }

    stack.source = use_analytic ? DerivativeStack::Source::Analytic
                                : DerivativeStack::Source::FiniteDifference;

    const std::size_t first = use_analytic ? 1 : 0;
    parallel_for_chunks(static_cast<std::size_t>(samples.m()) - first, 256,
                        [&](std::size_t, std::size_t begin, std::size_t end) {
                            for (std::size_t r = begin + first; r < end + first; ++r) {
                                const Eigen::VectorXd x =
                                    samples.values.row(static_cast<int>(r)).transpose();
                                const Eigen::VectorXd v =
                                    use_analytic ? model.analytic_partials(u, x)
                                                 : cross_partial_fd(model, u, x, scheme);
                                stack.values.row(static_cast<int>(r)) = v.transpose();
                            }
                        });
    return stack;
}

const char* to_string(DerivativeStack::Source source) {
    return source == DerivativeStack::Source::Analytic ? "analytic" : "fd";
}

}  // namespace proxy_sa
