#include "proxy_sa/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "proxy_sa/errors.hpp"

namespace proxy_sa {

namespace {

ReferenceIndex normalized_reference(const IndexSubset& subset, ReferenceIndex::Kind kind,
                                    const Eigen::MatrixXd& d_matrix, const Eigen::MatrixXd& sigma,
                                    ReferenceIndex::Provenance provenance) {
    const double tr_sigma = sigma.trace();
    if (!(tr_sigma > 0.0)) throw DegenerateModelError("reference: zero output variance");
    const int n = static_cast<int>(sigma.rows());
    ReferenceIndex ref;
    ref.subset = subset;
    ref.kind = kind;
    ref.provenance = provenance;
    ref.value_first_type = d_matrix.trace() / tr_sigma;
    ref.value_second_type = CovMatrix(d_matrix).frobenius() / (n * tr_sigma);
    return ref;
}

double sinc(double z) { return z == 0.0 ? 1.0 : std::sin(z) / z; }

}  // namespace

PickFreezeEstimate pick_freeze_total(const ModelSpec& model, const IndexSubset& u, int m,
                                     const SeedPolicy& seed) {
    if (m < 2) throw InsufficientDataError("pick_freeze_total requires m >= 2");
    if (u.indices().back() > model.d) {
        throw ValidationError("pick_freeze_total: subset exceeds d");
    }
    const int d = model.d;
    const UnitSample joint = prng_points(m, 2 * d, seed);

    UnitSample base, shadow;
    base.generator = shadow.generator = Generator::Prng;
    base.points = joint.points.leftCols(d);
    shadow.points = joint.points.rightCols(d);
    const SampleMatrix x = transform(base, model.space);
    const SampleMatrix x_prime = transform(shadow, model.space);

    Eigen::MatrixXd outputs(m, model.n_out);
    Eigen::MatrixXd d_tot = Eigen::MatrixXd::Zero(model.n_out, model.n_out);
    for (int i = 0; i < m; ++i) {
        const Eigen::VectorXd fx = model.evaluate_fn(x.values.row(i).transpose());
        Eigen::VectorXd mixed = x.values.row(i).transpose();
        for (int j : u.indices()) mixed(j - 1) = x_prime.values(i, j - 1);
        const Eigen::VectorXd diff = fx - model.evaluate_fn(mixed);
        d_tot.noalias() += diff * diff.transpose();
        outputs.row(i) = fx.transpose();
    }
    d_tot /= 2.0 * static_cast<double>(m);

    PickFreezeEstimate out;
    out.sigma = output_covariance(outputs);
    if (!(out.sigma.trace() > 0.0)) {
        throw DegenerateModelError(model.name + ": zero output variance in pick-freeze");
    }
    out.index = normalized_reference(u, ReferenceIndex::Kind::Total, d_tot, out.sigma.matrix(),
                                     ReferenceIndex::Provenance::PickFreeze);
    out.d_tot = CovMatrix(std::move(d_tot));
    return out;
}

CovMatrix superset_matrix(const std::map<IndexSubset, CovMatrix>& totals, const IndexSubset& u) {
    const std::vector<int>& idx = u.indices();
    const int nu = u.size();
    CovMatrix result;
    bool started = false;
    for (int mask = 1; mask < (1 << nu); ++mask) {
        std::vector<int> v;
        for (int b = 0; b < nu; ++b) {
            if (mask & (1 << b)) v.push_back(idx[static_cast<std::size_t>(b)]);
        }
        const IndexSubset vs(v);
        const auto it = totals.find(vs);
        if (it == totals.end()) {
            throw IncompleteInputError("superset_matrix: missing total for subset " +
                                       vs.to_string());
        }
        const double sign = (vs.size() % 2 == 1) ? 1.0 : -1.0;
        if (!started) {
            result = it->second.scaled(sign);
            started = true;
        } else {
            result = result + it->second.scaled(sign);
        }
    }
    return result;
}

ReferenceIndex superset_index(const std::map<IndexSubset, CovMatrix>& totals,
                              const IndexSubset& u, const CovMatrix& sigma, int n_out) {
    const CovMatrix d_sup = superset_matrix(totals, u);
    ReferenceIndex ref = normalized_reference(
        u, u.size() == 1 ? ReferenceIndex::Kind::Total : ReferenceIndex::Kind::TotalInteraction,
        d_sup.matrix(), sigma.matrix(), ReferenceIndex::Provenance::PickFreeze);
    (void)n_out;
    return ref;
}

std::vector<ReferenceIndex> ishigami_reference(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const int n = static_cast<int>(a.size());
    const double e4 = std::pow(M_PI, 4) / 5.0;
    const double e8 = std::pow(M_PI, 8) / 9.0;
    const double var_x4 = std::pow(M_PI, 8) * (1.0 / 9.0 - 1.0 / 25.0);

    Eigen::MatrixXd sigma(n, n), d1(n, n), d2(n, n), d3(n, n), d1_fo(n, n);
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            const double g = 1.0 + (b(k) + b(l)) * e4 + b(k) * b(l) * e8;
            d1(k, l) = 0.5 * g;
            d2(k, l) = a(k) * a(l) / 8.0;
            d3(k, l) = 0.5 * b(k) * b(l) * var_x4;
            d1_fo(k, l) = 0.5 * (1.0 + b(k) * e4) * (1.0 + b(l) * e4);
            sigma(k, l) = 0.5 * g + a(k) * a(l) / 8.0;
        }
    }
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(n, n);

    std::vector<ReferenceIndex> out;
    using K = ReferenceIndex::Kind;
    const auto P = ReferenceIndex::Provenance::ClosedForm;
    out.push_back(normalized_reference(IndexSubset::singleton(1), K::Total, d1, sigma, P));
    out.push_back(normalized_reference(IndexSubset::singleton(2), K::Total, d2, sigma, P));
    out.push_back(normalized_reference(IndexSubset::singleton(3), K::Total, d3, sigma, P));
    out.push_back(normalized_reference(IndexSubset::singleton(1), K::FirstOrder, d1_fo, sigma, P));
    out.push_back(normalized_reference(IndexSubset::singleton(2), K::FirstOrder, d2, sigma, P));
    out.push_back(normalized_reference(IndexSubset::singleton(3), K::FirstOrder, zero, sigma, P));
    out.push_back(normalized_reference(IndexSubset::of({1, 2}), K::TotalInteraction, zero, sigma, P));
    out.push_back(normalized_reference(IndexSubset::of({1, 3}), K::TotalInteraction, d3, sigma, P));
    out.push_back(normalized_reference(IndexSubset::of({2, 3}), K::TotalInteraction, zero, sigma, P));
    return out;
}

namespace {

// Closed-form variances for cos/sin of an affine form on uniform(-1,1)
// inputs, via characteristic functions: E[e^{i w X}] = sinc(w).
struct AffineTrig {
    bool is_cos;
    double c;
    std::vector<int> vars;       // 1-based
    std::vector<double> coeffs;

    // Var of E[trig | x_kept].
    double conditional_variance(const std::vector<int>& kept) const {
        double outside = 1.0;      // prod sinc over integrated-out inputs
        double s1 = 1.0, s2 = 1.0; // prod sinc(a), sinc(2a) over kept inputs
        for (std::size_t i = 0; i < vars.size(); ++i) {
            const bool in = std::find(kept.begin(), kept.end(), vars[i]) != kept.end();
            if (in) {
                s1 *= sinc(coeffs[i]);
                s2 *= sinc(2.0 * coeffs[i]);
            } else {
                outside *= sinc(coeffs[i]);
            }
        }
        const double mean = (is_cos ? std::cos(c) : std::sin(c)) * s1;
        const double second =
            is_cos ? 0.5 * (1.0 + std::cos(2.0 * c) * s2) : 0.5 * (1.0 - std::cos(2.0 * c) * s2);
        return outside * outside * (second - mean * mean);
    }

    double variance() const { return conditional_variance(vars); }

    std::vector<int> complement_within(const std::vector<int>& removed) const {
        std::vector<int> kept;
        for (int v : vars) {
            if (std::find(removed.begin(), removed.end(), v) == removed.end()) kept.push_back(v);
        }
        return kept;
    }

    double total_effect(const std::vector<int>& removed) const {
        return variance() - conditional_variance(complement_within(removed));
    }
};

}  // namespace

std::vector<ReferenceIndex> block_additive_reference() {
    const AffineTrig cos_block{true, -0.8, {1, 3, 5}, {-1.1, 1.0, 1.1}};
    const AffineTrig sin_block{false, 0.5, {2, 4, 6}, {1.0, 0.9, -1.1}};
    const double var_f = cos_block.variance() + sin_block.variance();
    const Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(1, 1, var_f);

    auto block_of = [&](int j) -> const AffineTrig& {
        return (j % 2 == 1) ? cos_block : sin_block;
    };

    std::vector<ReferenceIndex> out;
    using K = ReferenceIndex::Kind;
    const auto P = ReferenceIndex::Provenance::ClosedForm;
    auto push = [&](const IndexSubset& u, K kind, double value) {
        out.push_back(normalized_reference(u, kind, Eigen::MatrixXd::Constant(1, 1, value),
                                           sigma, P));
    };

    for (int j = 1; j <= 6; ++j) {
        push(IndexSubset::singleton(j), K::Total, block_of(j).total_effect({j}));
        push(IndexSubset::singleton(j), K::FirstOrder, block_of(j).conditional_variance({j}));
    }
    for (int j = 1; j <= 6; ++j) {
        for (int k = j + 1; k <= 6; ++k) {
            double value = 0.0;
            if ((j % 2) == (k % 2)) {  // same block
                const AffineTrig& blk = block_of(j);
                value = blk.total_effect({j}) + blk.total_effect({k}) - blk.total_effect({j, k});
            }
            push(IndexSubset::of({j, k}), K::TotalInteraction, value);
        }
    }
    return out;
}

std::vector<ReferenceIndex> gsobol_reference(const Eigen::MatrixXd& A) {
    const int n = static_cast<int>(A.rows());
    const int d = static_cast<int>(A.cols());

    // c_j(k,l) = Cov(g_kj, g_lj) = 1 / (3 (1+A_kj)(1+A_lj)); everything else
    // follows from the independent product structure.
    std::vector<Eigen::MatrixXd> c(static_cast<std::size_t>(d));
    Eigen::MatrixXd prod_all = Eigen::MatrixXd::Ones(n, n);
    for (int j = 0; j < d; ++j) {
        Eigen::MatrixXd cj(n, n);
        for (int k = 0; k < n; ++k) {
            for (int l = 0; l < n; ++l) {
                cj(k, l) = 1.0 / (3.0 * (1.0 + A(k, j)) * (1.0 + A(l, j)));
            }
        }
        c[static_cast<std::size_t>(j)] = cj;
        prod_all = prod_all.cwiseProduct(Eigen::MatrixXd::Ones(n, n) + cj);
    }
    const Eigen::MatrixXd sigma = prod_all - Eigen::MatrixXd::Ones(n, n);

    auto prod_excluding = [&](const std::vector<int>& ex) {
        Eigen::MatrixXd p = prod_all;
        for (int j : ex) {
            p = p.cwiseQuotient(Eigen::MatrixXd::Ones(n, n) + c[static_cast<std::size_t>(j - 1)]);
        }
        return p;
    };

    std::vector<ReferenceIndex> out;
    using K = ReferenceIndex::Kind;
    const auto P = ReferenceIndex::Provenance::ClosedForm;
    for (int j = 1; j <= d; ++j) {
        const Eigen::MatrixXd d_tot =
            c[static_cast<std::size_t>(j - 1)].cwiseProduct(prod_excluding({j}));
        out.push_back(normalized_reference(IndexSubset::singleton(j), K::Total, d_tot, sigma, P));
        out.push_back(normalized_reference(IndexSubset::singleton(j), K::FirstOrder,
                                           c[static_cast<std::size_t>(j - 1)], sigma, P));
    }
    for (int j = 1; j <= d; ++j) {
        for (int k = j + 1; k <= d; ++k) {
            const Eigen::MatrixXd d_sup = c[static_cast<std::size_t>(j - 1)]
                                              .cwiseProduct(c[static_cast<std::size_t>(k - 1)])
                                              .cwiseProduct(prod_excluding({j, k}));
            out.push_back(normalized_reference(IndexSubset::of({j, k}), K::TotalInteraction, d_sup,
                                               sigma, P));
        }
    }
    return out;
}

std::vector<ReferenceIndex> cdf_product_reference(const CdfProductParams& params) {
    const int n = static_cast<int>(params.a.rows());
    const int d = static_cast<int>(params.a.cols());

    // With F_j(X_j) ~ U(0,1): E g = a/2 + b, E[g g'] = aa'/3 + (ab'+a'b)/2 + bb',
    // Cov(g, g') = aa'/12.
    std::vector<Eigen::MatrixXd> second(static_cast<std::size_t>(d)),
        mean_outer(static_cast<std::size_t>(d)), cov(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        Eigen::MatrixXd s(n, n), mo(n, n), cv(n, n);
        for (int k = 0; k < n; ++k) {
            for (int l = 0; l < n; ++l) {
                const double ak = params.a(k, j), al = params.a(l, j);
                const double bk = params.b(k, j), bl = params.b(l, j);
                s(k, l) = ak * al / 3.0 + (ak * bl + al * bk) / 2.0 + bk * bl;
                mo(k, l) = (ak / 2.0 + bk) * (al / 2.0 + bl);
                cv(k, l) = ak * al / 12.0;
            }
        }
        second[static_cast<std::size_t>(j)] = s;
        mean_outer[static_cast<std::size_t>(j)] = mo;
        cov[static_cast<std::size_t>(j)] = cv;
    }

    auto prod_over = [&](const std::vector<Eigen::MatrixXd>& which, const std::vector<int>& skip) {
        Eigen::MatrixXd p = Eigen::MatrixXd::Ones(n, n);
        for (int j = 1; j <= d; ++j) {
            if (std::find(skip.begin(), skip.end(), j) == skip.end()) {
                p = p.cwiseProduct(which[static_cast<std::size_t>(j - 1)]);
            }
        }
        return p;
    };
    const Eigen::MatrixXd sigma = prod_over(second, {}) - prod_over(mean_outer, {});

    std::vector<ReferenceIndex> out;
    using K = ReferenceIndex::Kind;
    const auto P = ReferenceIndex::Provenance::ClosedForm;
    for (int j = 1; j <= d; ++j) {
        const Eigen::MatrixXd d_tot =
            cov[static_cast<std::size_t>(j - 1)].cwiseProduct(prod_over(second, {j}));
        const Eigen::MatrixXd d_fo =
            cov[static_cast<std::size_t>(j - 1)].cwiseProduct(prod_over(mean_outer, {j}));
        out.push_back(normalized_reference(IndexSubset::singleton(j), K::Total, d_tot, sigma, P));
        out.push_back(normalized_reference(IndexSubset::singleton(j), K::FirstOrder, d_fo, sigma, P));
    }
    for (int j = 1; j <= d; ++j) {
        for (int k = j + 1; k <= d; ++k) {
            const Eigen::MatrixXd d_sup = cov[static_cast<std::size_t>(j - 1)]
                                              .cwiseProduct(cov[static_cast<std::size_t>(k - 1)])
                                              .cwiseProduct(prod_over(second, {j, k}));
            out.push_back(normalized_reference(IndexSubset::of({j, k}), K::TotalInteraction, d_sup,
                                               sigma, P));
        }
    }
    return out;
}

std::vector<ReferenceIndex> closed_form_reference(const std::string& builtin_name) {
    if (builtin_name == "ishigami") {
        Eigen::VectorXd a(1), b(1);
        a << 7.0;
        b << 0.1;
        return ishigami_reference(a, b);
    }
    if (builtin_name == "ishigami_mv") {
        Eigen::VectorXd a(3), b(3);
        a << 7.0, 5.896, 6.494;
        b << 0.1, 0.1, 0.125;
        return ishigami_reference(a, b);
    }
    if (builtin_name == "block_additive") return block_additive_reference();
    if (builtin_name == "gsobol_mv") return gsobol_reference(gsobol_default_matrix());
    if (builtin_name == "cdf_product") {
        CdfProductParams p;
        p.a = Eigen::MatrixXd::Ones(1, 2);
        p.b = Eigen::MatrixXd::Zero(1, 2);
        p.marginals = {Marginal::uniform(0.0, 1.0), Marginal::uniform(0.0, 1.0)};
        return cdf_product_reference(p);
    }
    throw CapabilityError("no closed-form reference for model: " + builtin_name);
}

}  // namespace proxy_sa
