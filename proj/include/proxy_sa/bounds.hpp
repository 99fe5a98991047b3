#pragma once

#include <map>
#include <optional>
#include <vector>

#include "proxy_sa/differentiation.hpp"
#include "proxy_sa/linalg.hpp"
#include "proxy_sa/marginals.hpp"
#include "proxy_sa/models.hpp"

namespace proxy_sa {

// Poincare constants of one marginal. c_best() is the factor used in the
// classical upper-bound column: the smaller of the optimal constant and the
// min(sup_w / 2, 4 sup_cheeger^2) constant.
struct PoincareConstants {
    double c_optimal = 0.0;    // classical optimal constant C_op(mu)
    double c_new = 0.0;        // min(sup_w / 2, 4 * sup_cheeger^2)
    double sup_w = 0.0;        // sup F(1-F)/rho^2
    double sup_cheeger = 0.0;  // sup F(1-F)/rho

    double c_best() const { return std::min(c_optimal, c_new); }
};

// Uniform marginals use closed forms (C_op = ((hi-lo)/pi)^2, suprema at the
// median); user-defined marginals search a quantile-spaced grid of
// grid_points nodes refined by golden section around the argmax. A supremum
// still growing at the refinement limit raises DivergenceError.
PoincareConstants poincare_constants(const Marginal& marginal, int grid_points = 4096);

// Unweighted mean of derivative outer products, (1/m) sum_i d_i d_i^T.
CovMatrix dgsm(const DerivativeStack& stack);

// Classical Poincare bound U_u = prod_{k in u} c_best(mu_k) * Tr(DGSM_u) / Tr(Sigma).
double classical_bound(const CovMatrix& dgsm_u, const std::vector<PoincareConstants>& constants,
                       const IndexSubset& u, double sigma_trace);

// Per-input interaction super-sets A_j; every subset listed under j must
// contain j.
struct InteractionSets {
    std::vector<std::vector<IndexSubset>> sets;

    void validate() const;
    int dimension() const { return static_cast<int>(sets.size()); }
};

// Sum of non-normalized trace proxies over every nonempty subset of {1..d}
// (d <= 6), or over the union of declared interaction sets when one is
// supplied; subsets outside the declared union are known-zero terms.
double general_bound_sum(const std::map<IndexSubset, double>& trace_proxies, int d,
                         const std::optional<InteractionSets>& declared = std::nullopt);

struct OrderedBound {
    double bound = 0.0;
    std::vector<int> selection_order;  // 1-based input indices, ascending D
};

// Ordered aggregation: inputs sorted by increasing D_j (ties by smallest
// index); input (j) contributes |A_(j) \ union of earlier A_(i)| / 2 * D_(j).
OrderedBound ordered_interaction_bound(const std::vector<double>& per_input_d,
                                       const InteractionSets& sets);

}  // namespace proxy_sa
