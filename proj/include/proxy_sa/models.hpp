#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "proxy_sa/marginals.hpp"

namespace proxy_sa {

// Nonempty subset u of {1, ..., d}, 1-based, strictly increasing.
class IndexSubset {
public:
    IndexSubset() = default;
    explicit IndexSubset(std::vector<int> indices);
    static IndexSubset of(std::initializer_list<int> indices) {
        return IndexSubset(std::vector<int>(indices));
    }
    static IndexSubset singleton(int j) { return IndexSubset({j}); }

    // Parses "1:3" or "1,3".
    static IndexSubset parse(const std::string& text);

    const std::vector<int>& indices() const { return indices_; }
    int size() const { return static_cast<int>(indices_.size()); }
    bool contains(int j) const;
    bool is_subset_of(const IndexSubset& other) const;

    // Colon-joined 1-based indices, e.g. "1" or "1:3".
    std::string to_string() const;

    bool operator==(const IndexSubset& o) const { return indices_ == o.indices_; }
    bool operator!=(const IndexSubset& o) const { return indices_ != o.indices_; }
    bool operator<(const IndexSubset& o) const { return indices_ < o.indices_; }

private:
    std::vector<int> indices_;
};

// Deterministic map f: R^d -> R^N with optional analytic cross-partials and
// optional interaction super-sets A_j.
struct ModelSpec {
    using Evaluate = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
    // May throw CapabilityError for subsets it has no closed form for.
    using Partial = std::function<Eigen::VectorXd(const IndexSubset&, const Eigen::VectorXd&)>;

    std::string name;
    int d = 0;
    int n_out = 1;
    InputSpace space;
    Evaluate evaluate_fn;
    Partial analytic_partials;  // empty when no analytic form exists
    // interaction_sets[j-1] lists every subset containing j whose
    // cross-partial is not identically zero.
    std::optional<std::vector<std::vector<IndexSubset>>> interaction_sets;
    std::string smoothness_note;

    bool has_analytic_partials() const { return static_cast<bool>(analytic_partials); }
};

struct CdfProductParams {
    // Row k holds the output-k coefficients; columns follow the inputs.
    Eigen::MatrixXd a;  // N x d
    Eigen::MatrixXd b;  // N x d
    std::vector<Marginal> marginals;
};

// Built-in test functions. Recognized names: ishigami, ishigami_mv,
// block_additive, gsobol_mv, cdf_product.
ModelSpec builtin(const std::string& name);
ModelSpec builtin_cdf_product(const CdfProductParams& params);
ModelSpec builtin_gsobol(const Eigen::MatrixXd& A);

// The 4 x 10 coefficient matrix used by the gsobol_mv default.
Eigen::MatrixXd gsobol_default_matrix();

// f(x); throws std::domain_error when x leaves the open support.
Eigen::VectorXd evaluate(const ModelSpec& model, const Eigen::VectorXd& x);

// d^{|u|} f / dx_u at an interior point; CapabilityError when the model has
// no analytic form for u (callers fall back to finite differences).
Eigen::VectorXd analytic_partial(const ModelSpec& model, const IndexSubset& u,
                                 const Eigen::VectorXd& x);

// General registration hook for user models.
ModelSpec make_model(std::string name, InputSpace space, int n_out,
                     ModelSpec::Evaluate evaluate,
                     ModelSpec::Partial analytic_partials = nullptr);

}  // namespace proxy_sa
