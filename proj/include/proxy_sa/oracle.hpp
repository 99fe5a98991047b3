#pragma once

#include <map>
#include <string>
#include <vector>

#include "proxy_sa/differentiation.hpp"
#include "proxy_sa/estimators.hpp"
#include "proxy_sa/linalg.hpp"
#include "proxy_sa/models.hpp"

namespace proxy_sa {

// A reference value for one subset: both normalizations plus where it came
// from.
struct ReferenceIndex {
    enum class Kind { Total, TotalInteraction, FirstOrder };
    enum class Provenance { ClosedForm, PickFreeze, Quadrature };

    IndexSubset subset;
    Kind kind = Kind::Total;
    double value_first_type = 0.0;
    double value_second_type = 0.0;
    Provenance provenance = Provenance::ClosedForm;
};

struct PickFreezeEstimate {
    CovMatrix d_tot;   // Jansen estimate of the total-effect covariance
    CovMatrix sigma;   // output covariance from the base sample
    ReferenceIndex index;
};

// Jansen pick-and-freeze estimate of D_u^tot = Var[f - E(f | X_{~u})] from m
// paired PRNG rows: (1/(2m)) sum_i (f(X_i) - f(X'_{i,u}, X_{i,~u})) (...)^T.
PickFreezeEstimate pick_freeze_total(const ModelSpec& model, const IndexSubset& u, int m,
                                     const SeedPolicy& seed);

// Inclusion-exclusion over nonempty v subseteq u:
// D_u^sup = sum (-1)^{|v|+1} D_v^tot. Missing entries raise
// IncompleteInputError.
CovMatrix superset_matrix(const std::map<IndexSubset, CovMatrix>& totals, const IndexSubset& u);

ReferenceIndex superset_index(const std::map<IndexSubset, CovMatrix>& totals,
                              const IndexSubset& u, const CovMatrix& sigma, int n_out);

// Analytic sensitivity indices for the built-in families (default
// parameters). Singleton totals and first-order values plus all pair
// total-interaction values. CapabilityError for models without closed forms.
std::vector<ReferenceIndex> closed_form_reference(const std::string& builtin_name);
std::vector<ReferenceIndex> cdf_product_reference(const CdfProductParams& params);
std::vector<ReferenceIndex> gsobol_reference(const Eigen::MatrixXd& A);
std::vector<ReferenceIndex> ishigami_reference(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
std::vector<ReferenceIndex> block_additive_reference();

// ---------------------------------------------------------------------------
// Tensor-quadrature verification at low dimension (Gauss-Legendre after the
// quantile transform; inner integrals with indicator or min kernels are split
// at the kink so every panel is smooth).

// Var(f) for d <= 2.
CovMatrix quadrature_variance(const ModelSpec& model, int nodes);

// Population value of the weighted derivative outer-product integral
// (1/2^{|u|}) int d_u f d_u f^T prod F(1-F)/rho^2 dmu for d <= 2.
CovMatrix quadrature_nub(const ModelSpec& model, const IndexSubset& u, int nodes,
                         DerivativeMode mode = DerivativeMode::Auto);

// Var(tief_u) through the two-sample covariance kernel
// prod [F(min(x,x')) - F(x)F(x')] / (rho(x) rho(x')), d + |u| <= 4.
CovMatrix quadrature_tief_variance(const ModelSpec& model, const IndexSubset& u, int nodes,
                                   DerivativeMode mode = DerivativeMode::Auto);

struct EqualityReport {
    std::string statement;
    double lhs = 0.0;        // scalar summary (trace for matrices)
    double rhs = 0.0;
    double residual = 0.0;   // compared against tolerance
    double tolerance = 0.0;
    bool pass() const { return residual <= tolerance; }
};

enum class IdentityExpectation { Equality, UpperBound };

// Checks the one-sample variance identity: LHS = Var(tief_u) via the
// two-sample kernel, RHS = the one-sample weighted integral. Equality for the
// CDF-product family; for other models the RHS must dominate (residual is the
// PSD violation of RHS - LHS, clamped at 0).
EqualityReport verify_variance_identity(const ModelSpec& model, const IndexSubset& u, int nodes,
                                        double tolerance = 1e-10,
                                        DerivativeMode mode = DerivativeMode::Auto);
EqualityReport verify_variance_identity(const ModelSpec& model, const IndexSubset& u, int nodes,
                                        double tolerance, IdentityExpectation expectation,
                                        DerivativeMode mode = DerivativeMode::Auto);

// d = 2 functional-ANOVA checks via the derivative-route components:
// centering of f_1, f_2, f_12; pairwise orthogonality; variance sum.
std::vector<EqualityReport> verify_anova_structure(const ModelSpec& model, int nodes,
                                                   double tolerance = 1e-8,
                                                   DerivativeMode mode = DerivativeMode::Auto);

}  // namespace proxy_sa
