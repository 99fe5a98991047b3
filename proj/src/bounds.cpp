#include "proxy_sa/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "proxy_sa/errors.hpp"

namespace proxy_sa {

namespace {

struct SupSearch {
    double arg = 0.0;
    double value = 0.0;
    bool at_edge = false;
};

// Grid over quantiles k/(G+1) followed by golden-section refinement between
// the argmax's grid neighbours.
SupSearch supremum_on_quantile_grid(const Marginal& m, int grid_points,
                                    const std::function<double(double)>& fn) {
    SupSearch best;
    double best_p = 0.5;
    int best_k = 0;
    for (int k = 1; k <= grid_points; ++k) {
        const double p = static_cast<double>(k) / (grid_points + 1);
        const double x = m.quantile(p);
        const double v = fn(x);
        if (v > best.value || k == 1) {
            best.value = v;
            best.arg = x;
            best_p = p;
            best_k = k;
        }
    }
    best.at_edge = (best_k == 1 || best_k == grid_points);

    const double p_lo = std::max(best_p - 1.0 / (grid_points + 1), 1e-12);
    const double p_hi = std::min(best_p + 1.0 / (grid_points + 1), 1.0 - 1e-12);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = p_lo, b = p_hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = fn(m.quantile(c)), fd = fn(m.quantile(d));
    for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = fn(m.quantile(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = fn(m.quantile(d));
        }
    }
    const double p_star = 0.5 * (a + b);
    const double x_star = m.quantile(p_star);
    const double v_star = fn(x_star);
    if (v_star > best.value) {
        best.value = v_star;
        best.arg = x_star;
    }
    return best;
}

}  // namespace

PoincareConstants poincare_constants(const Marginal& marginal, int grid_points) {
    if (grid_points < 128) throw ValidationError("poincare_constants: grid_points >= 128");
    PoincareConstants out;
    if (marginal.kind() == Marginal::Kind::Uniform) {
        const double width = marginal.width();
        out.c_optimal = (width / M_PI) * (width / M_PI);
        out.sup_w = width * width / 4.0;  // F(1-F)/rho^2 peaks at the midpoint
        out.sup_cheeger = width / 4.0;
        out.c_new = std::min(out.sup_w / 2.0, 4.0 * out.sup_cheeger * out.sup_cheeger);
        return out;
    }

    auto weight = [&](double x) { return marginal.poincare_weight(x); };
    auto cheeger = [&](double x) {
        const double f = marginal.cdf(x);
        return f * (1.0 - f) / marginal.pdf(x);
    };
    const SupSearch sw = supremum_on_quantile_grid(marginal, grid_points, weight);
    const SupSearch sc = supremum_on_quantile_grid(marginal, grid_points, cheeger);
    // An argmax sitting on the first/last grid point means the weight is
    // still growing toward the boundary: the supremum is not attained inside.
    if (sw.at_edge || sc.at_edge) {
        throw DivergenceError(marginal.name() +
                              ": weight supremum still growing at the support boundary");
    }
    out.sup_w = sw.value;
    out.sup_cheeger = sc.value;
    out.c_new = std::min(out.sup_w / 2.0, 4.0 * out.sup_cheeger * out.sup_cheeger);
    // No spectral solver here: for non-uniform marginals the best available
    // constant is the c_new value itself.
    out.c_optimal = out.c_new;
    return out;
}

CovMatrix dgsm(const DerivativeStack& stack) {
    const int m = stack.m();
    const int n = static_cast<int>(stack.values.cols());
    if (m < 1) throw InsufficientDataError("dgsm: empty stack");
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < m; ++i) {
        acc.noalias() += stack.values.row(i).transpose() * stack.values.row(i);
    }
    acc /= static_cast<double>(m);
    return CovMatrix(0.5 * (acc + acc.transpose()));
}

double classical_bound(const CovMatrix& dgsm_u, const std::vector<PoincareConstants>& constants,
                       const IndexSubset& u, double sigma_trace) {
    if (!(sigma_trace > 0.0)) throw DegenerateModelError("classical_bound: Tr(Sigma) <= 0");
    double factor = 1.0;
    for (int j : u.indices()) {
        if (j > static_cast<int>(constants.size())) {
            throw ShapeError("classical_bound: missing constants for input " + std::to_string(j));
        }
        factor *= constants[static_cast<std::size_t>(j - 1)].c_best();
    }
    return factor * dgsm_u.trace() / sigma_trace;
}

void InteractionSets::validate() const {
    for (std::size_t j = 0; j < sets.size(); ++j) {
        if (sets[j].empty() || sets[j].size() > (1u << (sets.size() - 1))) {
            throw ValidationError("InteractionSets: |A_j| must be in [1, 2^(d-1)] for input " +
                                  std::to_string(j + 1));
        }
        for (const IndexSubset& s : sets[j]) {
            if (!s.contains(static_cast<int>(j + 1))) {
                throw ValidationError("InteractionSets: subset " + s.to_string() +
                                      " listed under input " + std::to_string(j + 1) +
                                      " does not contain it");
            }
            if (s.indices().back() > static_cast<int>(sets.size())) {
                throw ValidationError("InteractionSets: subset " + s.to_string() + " exceeds d");
            }
        }
    }
}

double general_bound_sum(const std::map<IndexSubset, double>& trace_proxies, int d,
                         const std::optional<InteractionSets>& declared) {
    if (d < 1) throw ValidationError("general_bound_sum: d >= 1");
    std::vector<IndexSubset> required;
    if (declared) {
        declared->validate();
        std::set<IndexSubset> active;
        for (const auto& per_input : declared->sets) {
            for (const IndexSubset& s : per_input) active.insert(s);
        }
        required.assign(active.begin(), active.end());
    } else {
        if (d > 6) {
            throw IncompleteInputError(
                "general_bound_sum: full subset cover is capped at d <= 6; declare interaction "
                "sets for larger d");
        }
        for (int mask = 1; mask < (1 << d); ++mask) {
            std::vector<int> v;
            for (int b = 0; b < d; ++b) {
                if (mask & (1 << b)) v.push_back(b + 1);
            }
            required.emplace_back(v);
        }
    }

    double sum = 0.0;
    for (const IndexSubset& u : required) {
        const auto it = trace_proxies.find(u);
        if (it == trace_proxies.end()) {
            throw IncompleteInputError("general_bound_sum: missing proxy for subset " +
                                       u.to_string());
        }
        sum += it->second;
    }
    return sum;
}

OrderedBound ordered_interaction_bound(const std::vector<double>& per_input_d,
                                       const InteractionSets& sets) {
    sets.validate();
    const int d = static_cast<int>(per_input_d.size());
    if (d != sets.dimension()) {
        throw ShapeError("ordered_interaction_bound: D values and interaction sets disagree on d");
    }

    std::vector<int> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return per_input_d[static_cast<std::size_t>(a - 1)] <
               per_input_d[static_cast<std::size_t>(b - 1)];
    });

    OrderedBound out;
    out.selection_order = order;
    std::set<IndexSubset> covered;
    for (int j : order) {
        int fresh = 0;
        for (const IndexSubset& s : sets.sets[static_cast<std::size_t>(j - 1)]) {
            if (covered.insert(s).second) ++fresh;
        }
        out.bound += 0.5 * static_cast<double>(fresh) * per_input_d[static_cast<std::size_t>(j - 1)];
    }
    return out;
}

}  // namespace proxy_sa
