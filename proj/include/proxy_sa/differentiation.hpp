#pragma once

#include <Eigen/Core>

#include "proxy_sa/models.hpp"
#include "proxy_sa/sampling.hpp"

namespace proxy_sa {

// Nested central differences. Step h_j = rel_step * scale_j, where scale_j is
// the support width (interquartile range for unbounded user marginals).
struct FDScheme {
    enum class BoundaryPolicy {
        // Within h of a boundary the stencil switches to a 3-point one-sided
        // second-order formula on the interior side.
        ShrinkToOneSided,
        // Never move the stencil; a point that would leave the support is an
        // error naming the offending coordinate.
        ClipSample,
    };

    double rel_step = 1e-5;
    BoundaryPolicy boundary = BoundaryPolicy::ShrinkToOneSided;
};

enum class DerivativeMode { Analytic, FiniteDifference, Auto };

// Per-sample values of one cross-partial d^{|u|} f / dx_u, m x N.
struct DerivativeStack {
    enum class Source { Analytic, FiniteDifference };

    IndexSubset subset;
    Eigen::MatrixXd values;  // m x N
    Source source = Source::FiniteDifference;

    int m() const { return static_cast<int>(values.rows()); }
};

// d^{|u|} f / dx_u at x by one central-difference recursion level per index
// in u; exactly 2^{|u|} model evaluations for interior stencils. |u| <= 3.
Eigen::VectorXd cross_partial_fd(const ModelSpec& model, const IndexSubset& u,
                                 const Eigen::VectorXd& x, const FDScheme& scheme);

// Derivative stack over the sample rows. Auto prefers the model's analytic
// form and falls back to finite differences when it is missing for u.
DerivativeStack partial_stack(const ModelSpec& model, const IndexSubset& u,
                              const SampleMatrix& samples, const FDScheme& scheme,
                              DerivativeMode mode = DerivativeMode::Auto);

const char* to_string(DerivativeStack::Source source);

}  // namespace proxy_sa
