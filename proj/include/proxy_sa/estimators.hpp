#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

#include "proxy_sa/differentiation.hpp"
#include "proxy_sa/linalg.hpp"
#include "proxy_sa/models.hpp"
#include "proxy_sa/sampling.hpp"

namespace proxy_sa {

// Per-subset proxy values derived from one weighted derivative outer-product
// matrix: the matrix itself, its trace and Frobenius reductions, and both
// normalized proxy types. For N = 1 the two types agree bitwise.
struct ProxyEstimate {
    IndexSubset subset;
    CovMatrix nub;
    double trace_value = 0.0;
    double frob_value = 0.0;
    double ub_first_type = 0.0;
    double ub_second_type = 0.0;
    int m = 0;
    DerivativeStack::Source source = DerivativeStack::Source::FiniteDifference;
};

// Monte Carlo value of one sensitivity functional at a point.
struct FunctionalEstimate {
    IndexSubset subset;
    Eigen::VectorXd at_point;
    Eigen::VectorXd value;
    int inner_m = 0;
};

// Unbiased sample covariance of the output rows (divisor m-1), symmetrized.
CovMatrix output_covariance(const Eigen::MatrixXd& outputs);

// (1 / (2^{|u|} m)) sum_i  d_u f(X_i) d_u f(X_i)^T  prod_{k in u} w_k(X_ik),
// w_k = F_k (1 - F_k) / rho_k^2. PSD by construction. The weight product is
// evaluated in log space for |u| >= 2; accumulation is compensated and runs
// in a fixed row order (fixed-size chunks combined in chunk order).
CovMatrix nub_matrix(const DerivativeStack& stack, const SampleMatrix& samples);

double trace_proxy(const CovMatrix& nub);

// Frobenius norm of the summed matrix (norm of the mean, not mean of norms).
double frob_proxy(const CovMatrix& nub);

// (trace(nub)/trace(sigma), frobenius(nub)/(N * trace(sigma))).
std::pair<double, double> normalized_proxies(const CovMatrix& nub, const CovMatrix& sigma,
                                             int n_out);

ProxyEstimate make_proxy_estimate(const IndexSubset& subset, CovMatrix nub,
                                  const CovMatrix& sigma, int n_out, int m,
                                  DerivativeStack::Source source);

// Mean over the inner rows x' of df/dx_j(x') (F_j(x'_j) - 1[x'_j >= x_j]) / rho_j(x'_j).
FunctionalEstimate first_order_functional(const ModelSpec& model, int j, double x_j,
                                          const SampleMatrix& inner, const FDScheme& scheme,
                                          DerivativeMode mode = DerivativeMode::Auto);

// (-1)^{|u|+1} x mean over inner rows x'_u of
// d^{|u|}f/dx_u(x'_u, x_{~u}) prod_{j in u} (F_j(x'_j) - 1[x'_j >= x_j]) / rho_j(x'_j).
// The inner sample shares the model's input space; only columns in u are used.
FunctionalEstimate tief_functional(const ModelSpec& model, const IndexSubset& u,
                                   const Eigen::VectorXd& x, const SampleMatrix& inner,
                                   const FDScheme& scheme,
                                   DerivativeMode mode = DerivativeMode::Auto);

// Functional-ANOVA component f_u(x_u): alternating sum over w subset of u and
// nonempty v subset of w, sharing one inner sample. |u| <= 2.
FunctionalEstimate anova_component(const ModelSpec& model, const IndexSubset& u,
                                   const Eigen::VectorXd& x, const SampleMatrix& inner,
                                   const FDScheme& scheme,
                                   DerivativeMode mode = DerivativeMode::Auto);

// ---------------------------------------------------------------------------
// Replicated studies

struct StudyOptions {
    Generator sampler = Generator::Sobol;
    int m = 1000;
    std::uint64_t seed = 0;
    std::uint64_t skip = 0;
    int replicates = 30;
    DerivativeMode derivatives = DerivativeMode::Auto;
    FDScheme scheme;
    // Subsets to estimate: order 1 = singletons, order 2 = singletons + all
    // pairs; an explicit list overrides the order.
    int order = 1;
    std::optional<std::vector<IndexSubset>> subsets;
    // Also accumulate the unweighted derivative outer-product trace per
    // subset (the classical-bound ingredient) from the same stacks.
    bool with_dgsm = false;
};

struct SubsetAggregate {
    IndexSubset subset;
    double mean_first = 0.0;
    double std_first = 0.0;
    double mean_second = 0.0;
    double std_second = 0.0;
    double mean_trace_nub = 0.0;   // non-normalized
    double mean_dgsm_trace = 0.0;  // filled when options.with_dgsm is set
    DerivativeStack::Source source = DerivativeStack::Source::FiniteDifference;
    std::vector<ProxyEstimate> replicates;
};

struct StudyResult {
    StudyOptions options;
    std::vector<SubsetAggregate> per_subset;  // singletons first, then pairs
    std::vector<double> sigma_trace;          // per replicate
    double mean_sigma_trace = 0.0;
};

std::vector<IndexSubset> subsets_for_order(int d, int order);

// Runs R independent replicates on the deterministic seed ladder (PRNG: one
// sub-seed per replicate; Sobol: replicate r uses the sequence block starting
// at skip + r*m) and aggregates mean and sample standard deviation per subset
// and estimator type.
StudyResult replicate_study(const ModelSpec& model, const StudyOptions& options);

}  // namespace proxy_sa
