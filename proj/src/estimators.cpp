#include "proxy_sa/estimators.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "proxy_sa/errors.hpp"
#include "proxy_sa/parallel.hpp"

namespace proxy_sa {

namespace {

constexpr std::size_t kRowChunk = 1024;

double weight_product(const SampleMatrix& samples, const IndexSubset& u, int row) {
    const auto& idx = u.indices();
    try {
        if (idx.size() == 1) {
            return samples.space.marginal(idx[0] - 1).poincare_weight(samples.values(row, idx[0] - 1));
        }
        // Log-space product; weights can be far below 1 for spread-out densities.
        double log_sum = 0.0;
        for (int j : idx) {
            const double w = samples.space.marginal(j - 1).poincare_weight(samples.values(row, j - 1));
            if (w == 0.0) return 0.0;
            log_sum += std::log(w);
        }
        return std::exp(log_sum);
    } catch (const SingularityError& e) {
        throw SingularityError("sample row " + std::to_string(row) + ": " + e.what());
    }
}

double sample_std(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

}  // namespace

CovMatrix output_covariance(const Eigen::MatrixXd& outputs) {
    const int m = static_cast<int>(outputs.rows());
    const int n = static_cast<int>(outputs.cols());
    if (m < 2) throw InsufficientDataError("output_covariance requires m >= 2 rows");
    const Eigen::RowVectorXd mean = outputs.colwise().mean();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < m; ++i) {
        const Eigen::RowVectorXd c = outputs.row(i) - mean;
        cov.noalias() += c.transpose() * c;
    }
    cov /= static_cast<double>(m - 1);
    return CovMatrix(0.5 * (cov + cov.transpose()));
}

CovMatrix nub_matrix(const DerivativeStack& stack, const SampleMatrix& samples) {
    const int m = stack.m();
    const int n = static_cast<int>(stack.values.cols());
    if (m != samples.m()) {
        throw ShapeError("nub_matrix: stack has " + std::to_string(m) + " rows, samples have " +
                         std::to_string(samples.m()));
    }
    const double scale = 1.0 / (std::ldexp(1.0, stack.subset.size()) * static_cast<double>(m));

    // Lower triangle accumulated per chunk with compensation, then combined
    // in chunk order; the result does not depend on the worker count.
    const std::size_t n_entries = static_cast<std::size_t>(n) * (n + 1) / 2;
    const std::size_t n_chunks = (static_cast<std::size_t>(m) + kRowChunk - 1) / kRowChunk;
    std::vector<std::vector<double>> partial(n_chunks, std::vector<double>(n_entries, 0.0));

    parallel_for_chunks(static_cast<std::size_t>(m), kRowChunk,
                        [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                            std::vector<CompensatedSum> acc(n_entries);
                            for (std::size_t r = begin; r < end; ++r) {
                                const int row = static_cast<int>(r);
                                const double w = weight_product(samples, stack.subset, row);
                                std::size_t e = 0;
                                for (int i = 0; i < n; ++i) {
                                    const double di = stack.values(row, i);
                                    for (int j = 0; j <= i; ++j, ++e) {
                                        acc[e].add(w * di * stack.values(row, j));
                                    }
                                }
                            }
                            for (std::size_t e = 0; e < n_entries; ++e) {
                                partial[chunk][e] = acc[e].value();
                            }
                        });

    std::vector<CompensatedSum> total(n_entries);
    for (std::size_t c = 0; c < n_chunks; ++c) {
        for (std::size_t e = 0; e < n_entries; ++e) total[e].add(partial[c][e]);
    }

    Eigen::MatrixXd nub(n, n);
    std::size_t e = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j, ++e) {
            const double v = scale * total[e].value();
            nub(i, j) = v;
            nub(j, i) = v;
        }
    }
    return CovMatrix(std::move(nub));
}

double trace_proxy(const CovMatrix& nub) { return nub.trace(); }

double frob_proxy(const CovMatrix& nub) { return nub.frobenius(); }

std::pair<double, double> normalized_proxies(const CovMatrix& nub, const CovMatrix& sigma,
                                             int n_out) {
    const double tr_sigma = sigma.trace();
    if (!(tr_sigma > 0.0)) {
        throw DegenerateModelError("normalized_proxies: output variance trace is not positive");
    }
    const double first = nub.trace() / tr_sigma;
    const double second = nub.frobenius() / (static_cast<double>(n_out) * tr_sigma);
    return {first, second};
}

ProxyEstimate make_proxy_estimate(const IndexSubset& subset, CovMatrix nub,
                                  const CovMatrix& sigma, int n_out, int m,
                                  DerivativeStack::Source source) {
    ProxyEstimate est;
    est.subset = subset;
    est.trace_value = trace_proxy(nub);
    est.frob_value = frob_proxy(nub);
    const auto [first, second] = normalized_proxies(nub, sigma, n_out);
    est.ub_first_type = first;
    est.ub_second_type = second;
    est.nub = std::move(nub);
    est.m = m;
    est.source = source;
    return est;
}

namespace {

// (F_j(x') - 1[x' >= threshold]) / rho_j(x') with the singularity surfaced
// by row index.
double indicator_kernel(const Marginal& mj, double x_prime, double threshold, int row) {
    const double rho = mj.pdf(x_prime);
    if (!(rho > 0.0)) {
        throw SingularityError("inner row " + std::to_string(row) +
                               ": density vanishes at x'=" + std::to_string(x_prime));
    }
    const double f = mj.cdf(x_prime);
    return (f - (x_prime >= threshold ? 1.0 : 0.0)) / rho;
}

}  // namespace

FunctionalEstimate first_order_functional(const ModelSpec& model, int j, double x_j,
                                          const SampleMatrix& inner, const FDScheme& scheme,
                                          DerivativeMode mode) {
    if (j < 1 || j > model.d) throw ValidationError("first_order_functional: index out of range");
    const Marginal& mj = model.space.marginal(j - 1);
    if (!mj.contains(x_j)) {
        throw std::domain_error("first_order_functional: x_j outside the support");
    }

    const DerivativeStack stack =
        partial_stack(model, IndexSubset::singleton(j), inner, scheme, mode);
    std::vector<CompensatedSum> acc(static_cast<std::size_t>(model.n_out));
    for (int i = 0; i < inner.m(); ++i) {
        const double k = indicator_kernel(mj, inner.values(i, j - 1), x_j, i);
        for (int c = 0; c < model.n_out; ++c) {
            acc[static_cast<std::size_t>(c)].add(stack.values(i, c) * k);
        }
    }
    FunctionalEstimate out;
    out.subset = IndexSubset::singleton(j);
    out.at_point = Eigen::VectorXd::Constant(model.d, std::nan(""));
    out.at_point(j - 1) = x_j;
    out.inner_m = inner.m();
    out.value.resize(model.n_out);
    for (int c = 0; c < model.n_out; ++c) {
        out.value(c) = acc[static_cast<std::size_t>(c)].value() / inner.m();
    }
    return out;
}

FunctionalEstimate tief_functional(const ModelSpec& model, const IndexSubset& u,
                                   const Eigen::VectorXd& x, const SampleMatrix& inner,
                                   const FDScheme& scheme, DerivativeMode mode) {
    if (u.indices().back() > model.d) {
        throw ValidationError("tief_functional: subset exceeds d");
    }
    // Substitute the inner draw into the u coordinates of x, differentiate
    // there, and weight by the per-coordinate indicator kernels.
    Eigen::MatrixXd points = Eigen::MatrixXd::Zero(inner.m(), model.d);
    for (int i = 0; i < inner.m(); ++i) {
        points.row(i) = x.transpose();
        for (int j : u.indices()) points(i, j - 1) = inner.values(i, j - 1);
    }
    SampleMatrix shifted{std::move(points), model.space};
    const DerivativeStack stack = partial_stack(model, u, shifted, scheme, mode);

    std::vector<CompensatedSum> acc(static_cast<std::size_t>(model.n_out));
    for (int i = 0; i < inner.m(); ++i) {
        double k = 1.0;
        for (int j : u.indices()) {
            k *= indicator_kernel(model.space.marginal(j - 1), inner.values(i, j - 1), x(j - 1), i);
        }
        for (int c = 0; c < model.n_out; ++c) {
            acc[static_cast<std::size_t>(c)].add(stack.values(i, c) * k);
        }
    }
    const double sign = (u.size() % 2 == 1) ? 1.0 : -1.0;  // (-1)^{|u|+1}
    FunctionalEstimate out;
    out.subset = u;
    out.at_point = x;
    out.inner_m = inner.m();
    out.value.resize(model.n_out);
    for (int c = 0; c < model.n_out; ++c) {
        out.value(c) = sign * acc[static_cast<std::size_t>(c)].value() / inner.m();
    }
    return out;
}

FunctionalEstimate anova_component(const ModelSpec& model, const IndexSubset& u,
                                   const Eigen::VectorXd& x, const SampleMatrix& inner,
                                   const FDScheme& scheme, DerivativeMode mode) {
    if (u.size() > 2) {
        throw ValidationError("anova_component: |u| <= 2 (inner-integral count grows as 3^{|u|})");
    }
    if (u.indices().back() > model.d) throw ValidationError("anova_component: subset exceeds d");

    const std::vector<int>& uidx = u.indices();
    Eigen::VectorXd total = Eigen::VectorXd::Zero(model.n_out);

    // Enumerate w subseteq u by bitmask, then nonempty v subseteq w.
    const int nu = u.size();
    for (int wmask = 0; wmask < (1 << nu); ++wmask) {
        std::vector<int> w;
        for (int b = 0; b < nu; ++b) {
            if (wmask & (1 << b)) w.push_back(uidx[static_cast<std::size_t>(b)]);
        }
        const int nw = static_cast<int>(w.size());
        const double outer_sign = ((nu - nw) % 2 == 0) ? 1.0 : -1.0;  // (-1)^{|u|-|w|}
        for (int vmask = 1; vmask < (1 << nw); ++vmask) {
            std::vector<int> v;
            for (int b = 0; b < nw; ++b) {
                if (vmask & (1 << b)) v.push_back(w[static_cast<std::size_t>(b)]);
            }
            const IndexSubset vs(v);

            // Integrand point: x' everywhere except coordinates in w \ v,
            // which are pinned to x.
            Eigen::MatrixXd points = inner.values;
            for (int j : w) {
                if (!vs.contains(j)) points.col(j - 1).setConstant(x(j - 1));
            }
            SampleMatrix shifted{std::move(points), model.space};
            const DerivativeStack stack = partial_stack(model, vs, shifted, scheme, mode);

            std::vector<CompensatedSum> acc(static_cast<std::size_t>(model.n_out));
            for (int i = 0; i < inner.m(); ++i) {
                double k = 1.0;
                for (int j : v) {
                    k *= indicator_kernel(model.space.marginal(j - 1), inner.values(i, j - 1),
                                          x(j - 1), i);
                }
                for (int c = 0; c < model.n_out; ++c) {
                    acc[static_cast<std::size_t>(c)].add(stack.values(i, c) * k);
                }
            }
            for (int c = 0; c < model.n_out; ++c) {
                total(c) += outer_sign * acc[static_cast<std::size_t>(c)].value() / inner.m();
            }
        }
    }

    FunctionalEstimate out;
    out.subset = u;
    out.at_point = x;
    out.inner_m = inner.m();
    out.value = total;
    return out;
}

std::vector<IndexSubset> subsets_for_order(int d, int order) {
    if (order < 1 || order > 2) throw ValidationError("subset order must be 1 or 2");
    std::vector<IndexSubset> out;
    for (int j = 1; j <= d; ++j) out.push_back(IndexSubset::singleton(j));
    if (order == 2) {
        for (int j = 1; j <= d; ++j) {
            for (int k = j + 1; k <= d; ++k) out.push_back(IndexSubset::of({j, k}));
        }
    }
    return out;
}

StudyResult replicate_study(const ModelSpec& model, const StudyOptions& options) {
    if (options.m < 2) throw ValidationError("replicate_study: m >= 2 required");
    if (options.replicates < 1) throw ValidationError("replicate_study: R >= 1 required");

    std::vector<IndexSubset> subsets =
        options.subsets ? *options.subsets : subsets_for_order(model.d, options.order);
    for (const IndexSubset& u : subsets) {
        if (u.indices().back() > model.d) {
            throw ValidationError("replicate_study: subset " + u.to_string() + " exceeds d");
        }
    }

    StudyResult result;
    result.options = options;
    result.per_subset.resize(subsets.size());
    for (std::size_t s = 0; s < subsets.size(); ++s) {
        result.per_subset[s].subset = subsets[s];
        result.per_subset[s].replicates.reserve(static_cast<std::size_t>(options.replicates));
    }
    result.sigma_trace.reserve(static_cast<std::size_t>(options.replicates));
    std::vector<std::vector<double>> dgsm_traces(subsets.size());

    for (int r = 0; r < options.replicates; ++r) {
        UnitSample unit;
        if (options.sampler == Generator::Sobol) {
            unit = sobol_points(options.m, model.d,
                                options.skip + static_cast<std::uint64_t>(r) *
                                                   static_cast<std::uint64_t>(options.m));
        } else {
            unit = prng_points(options.m, model.d, SeedPolicy{options.seed, r});
        }
        const SampleMatrix samples = transform(unit, model.space);

        Eigen::MatrixXd outputs(options.m, model.n_out);
        parallel_for_chunks(static_cast<std::size_t>(options.m), kRowChunk,
                            [&](std::size_t, std::size_t begin, std::size_t end) {
                                for (std::size_t i = begin; i < end; ++i) {
                                    outputs.row(static_cast<int>(i)) =
                                        model.evaluate_fn(samples.values.row(static_cast<int>(i))
                                                              .transpose())
                                            .transpose();
                                }
                            });
        const CovMatrix sigma = output_covariance(outputs);
        if (!(sigma.trace() > 0.0)) {
            throw DegenerateModelError(model.name + ": zero output variance");
        }
        result.sigma_trace.push_back(sigma.trace());

        for (std::size_t s = 0; s < subsets.size(); ++s) {
            const DerivativeStack stack =
                partial_stack(model, subsets[s], samples, options.scheme, options.derivatives);
            CovMatrix nub = nub_matrix(stack, samples);
            result.per_subset[s].replicates.push_back(make_proxy_estimate(
                subsets[s], std::move(nub), sigma, model.n_out, options.m, stack.source));
            if (options.with_dgsm) {
                dgsm_traces[s].push_back(stack.values.squaredNorm() /
                                         static_cast<double>(options.m));
            }
        }
    }

    result.mean_sigma_trace = mean_of(result.sigma_trace);
    for (std::size_t s = 0; s < subsets.size(); ++s) {
        result.per_subset[s].mean_dgsm_trace = mean_of(dgsm_traces[s]);
    }
    for (SubsetAggregate& agg : result.per_subset) {
        std::vector<double> first, second, traces;
        for (const ProxyEstimate& e : agg.replicates) {
            first.push_back(e.ub_first_type);
            second.push_back(e.ub_second_type);
            traces.push_back(e.trace_value);
        }
        agg.mean_first = mean_of(first);
        agg.std_first = sample_std(first);
        agg.mean_second = mean_of(second);
        agg.std_second = sample_std(second);
        agg.mean_trace_nub = mean_of(traces);
        agg.source = agg.replicates.front().source;
    }
    return result;
}

}  // namespace proxy_sa
