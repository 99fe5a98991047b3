#include "proxy_sa/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "proxy_sa/errors.hpp"

namespace proxy_sa {

IndexSubset::IndexSubset(std::vector<int> indices) : indices_(std::move(indices)) {
    if (indices_.empty()) throw ValidationError("IndexSubset must be nonempty");
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (indices_[i] < 1) throw ValidationError("IndexSubset indices are 1-based");
        if (i > 0 && indices_[i] <= indices_[i - 1]) {
            throw ValidationError("IndexSubset indices must be strictly increasing");
        }
    }
}

IndexSubset IndexSubset::parse(const std::string& text) {
    const char delim = text.find(':') != std::string::npos ? ':' : ',';
    std::vector<int> idx;
    std::string token;
    std::istringstream is(text);
    while (std::getline(is, token, delim)) {
        if (token.empty()) continue;
        idx.push_back(std::stoi(token));
    }
    std::sort(idx.begin(), idx.end());
    return IndexSubset(std::move(idx));
}

bool IndexSubset::contains(int j) const {
    return std::binary_search(indices_.begin(), indices_.end(), j);
}

bool IndexSubset::is_subset_of(const IndexSubset& other) const {
    return std::includes(other.indices_.begin(), other.indices_.end(),
                         indices_.begin(), indices_.end());
}

std::string IndexSubset::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (i) out += ':';
        out += std::to_string(indices_[i]);
    }
    return out;
}

namespace {

void check_inside(const ModelSpec& model, const Eigen::VectorXd& x) {
    if (x.size() != model.d) {
        throw ShapeError(model.name + ": point has dimension " + std::to_string(x.size()) +
                         ", expected " + std::to_string(model.d));
    }
    for (int j = 0; j < model.d; ++j) {
        if (!model.space.marginal(j).contains(x(j))) {
            throw std::domain_error(model.name + ": coordinate " + std::to_string(j + 1) +
                                    " = " + std::to_string(x(j)) + " is outside the open support");
        }
    }
}

void check_subset_range(const ModelSpec& model, const IndexSubset& u) {
    if (u.indices().back() > model.d) {
        throw ValidationError(model.name + ": subset " + u.to_string() + " exceeds d=" +
                              std::to_string(model.d));
    }
}

// --- Ishigami family ----------------------------------------------------
//
// f_k(x) = sin(x1) + a_k sin^2(x2) + b_k x3^4 sin(x1) on uniform(-pi,pi)^3.

ModelSpec make_ishigami(std::string name, Eigen::VectorXd a, Eigen::VectorXd b) {
    ModelSpec m;
    m.name = std::move(name);
    m.d = 3;
    m.n_out = static_cast<int>(a.size());
    m.space = InputSpace::uniform(-M_PI, M_PI, 3);
    m.evaluate_fn = [a, b](const Eigen::VectorXd& x) {
        const double s1 = std::sin(x(0));
        const double s2 = std::sin(x(1));
        const double x3_4 = x(2) * x(2) * x(2) * x(2);
        Eigen::VectorXd out(a.size());
        for (int k = 0; k < a.size(); ++k) {
            out(k) = s1 + a(k) * s2 * s2 + b(k) * x3_4 * s1;
        }
        return out;
    };
    m.analytic_partials = [a, b](const IndexSubset& u, const Eigen::VectorXd& x) {
        const int n = static_cast<int>(a.size());
        Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
        const auto& idx = u.indices();
        const double x3_3 = x(2) * x(2) * x(2);
        if (idx == std::vector<int>{1}) {
            for (int k = 0; k < n; ++k) {
                out(k) = std::cos(x(0)) * (1.0 + b(k) * x(2) * x3_3);
            }
        } else if (idx == std::vector<int>{2}) {
            for (int k = 0; k < n; ++k) out(k) = a(k) * std::sin(2.0 * x(1));
        } else if (idx == std::vector<int>{3}) {
            for (int k = 0; k < n; ++k) out(k) = 4.0 * b(k) * x3_3 * std::sin(x(0));
        } else if (idx == std::vector<int>{1, 3}) {
            for (int k = 0; k < n; ++k) out(k) = 4.0 * b(k) * x3_3 * std::cos(x(0));
        }
        // Every other cross term is identically zero.
        return out;
    };
    return m;
}

// --- Block-additive function ---------------------------------------------
//
// f(x) = cos(-0.8 - 1.1 x1 + x3 + 1.1 x5) + sin(0.5 + x2 + 0.9 x4 - 1.1 x6)
// on uniform(-1,1)^6. Cross-partials across the two blocks vanish exactly.

struct TrigBlock {
    bool is_cos;                 // cos block or sin block
    double c;                    // phase constant
    std::vector<int> vars;       // 1-based input indices
    std::vector<double> coeffs;  // matching linear coefficients

    double angle(const Eigen::VectorXd& x) const {
        double t = c;
        for (std::size_t i = 0; i < vars.size(); ++i) t += coeffs[i] * x(vars[i] - 1);
        return t;
    }
    // k-th derivative of cos/sin evaluated at the block angle.
    double deriv(int k, double theta) const {
        switch ((is_cos ? k : k + 3) % 4) {
            case 0: return std::cos(theta);
            case 1: return -std::sin(theta);
            case 2: return -std::cos(theta);
            default: return std::sin(theta);
        }
    }
};

ModelSpec make_block_additive() {
    const TrigBlock cos_block{true, -0.8, {1, 3, 5}, {-1.1, 1.0, 1.1}};
    const TrigBlock sin_block{false, 0.5, {2, 4, 6}, {1.0, 0.9, -1.1}};

    ModelSpec m;
    m.name = "block_additive";
    m.d = 6;
    m.n_out = 1;
    m.space = InputSpace::uniform(-1.0, 1.0, 6);
    m.evaluate_fn = [cos_block, sin_block](const Eigen::VectorXd& x) {
        Eigen::VectorXd out(1);
        out(0) = std::cos(cos_block.angle(x)) + std::sin(sin_block.angle(x));
        return out;
    };
    m.analytic_partials = [cos_block, sin_block](const IndexSubset& u, const Eigen::VectorXd& x) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(1);
        for (const TrigBlock& blk : {cos_block, sin_block}) {
            double coeff = 1.0;
            bool inside = true;
            for (int j : u.indices()) {
                const auto it = std::find(blk.vars.begin(), blk.vars.end(), j);
                if (it == blk.vars.end()) {
                    inside = false;
                    break;
                }
                coeff *= blk.coeffs[static_cast<std::size_t>(it - blk.vars.begin())];
            }
            if (inside) out(0) += coeff * blk.deriv(u.size(), blk.angle(x));
        }
        return out;
    };

    // Interaction super-sets: all subsets of each 3-input block containing j.
    std::vector<std::vector<IndexSubset>> sets(6);
    for (const auto& block : {std::vector<int>{1, 3, 5}, std::vector<int>{2, 4, 6}}) {
        for (int j : block) {
            std::vector<IndexSubset>& aj = sets[static_cast<std::size_t>(j - 1)];
            for (int mask = 1; mask < 8; ++mask) {
                std::vector<int> subset;
                for (int bit = 0; bit < 3; ++bit) {
                    if (mask & (1 << bit)) subset.push_back(block[static_cast<std::size_t>(bit)]);
                }
                IndexSubset s(subset);
                if (s.contains(j)) aj.push_back(s);
            }
        }
    }
    m.interaction_sets = std::move(sets);
    return m;
}

double sign0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

Eigen::MatrixXd gsobol_default_matrix() {
    Eigen::MatrixXd A(4, 10);
    A.row(0) << 0, 0, 6.52, 6.52, 6.52, 6.52, 6.52, 6.52, 6.52, 6.52;
    A.row(1) << 0, 1, 4.5, 9, 99, 99, 99, 99, 99, 99;
    A.row(2) << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10;
    A.row(3) << 50, 50, 50, 50, 50, 50, 50, 50, 50, 50;
    return A;
}

ModelSpec builtin_gsobol(const Eigen::MatrixXd& A) {
    if (A.rows() < 1 || A.cols() < 1 || (A.array() < 0.0).any()) {
        throw ValidationError("gsobol_mv: A must be a nonnegative N x d matrix");
    }
    ModelSpec m;
    m.name = "gsobol_mv";
    m.d = static_cast<int>(A.cols());
    m.n_out = static_cast<int>(A.rows());
    m.space = InputSpace::uniform(0.0, 1.0, m.d);
    m.smoothness_note = "continuous, differentiable almost everywhere (kinks at x_j = 1/2)";
    m.evaluate_fn = [A](const Eigen::VectorXd& x) {
        Eigen::VectorXd out = Eigen::VectorXd::Ones(A.rows());
        for (int j = 0; j < A.cols(); ++j) {
            const double g = std::abs(4.0 * x(j) - 2.0);
            for (int k = 0; k < A.rows(); ++k) {
                out(k) *= (g + A(k, j)) / (1.0 + A(k, j));
            }
        }
        return out;
    };
    // First-order partials only (sign(0) := 0 at the kink); higher orders go
    // through finite differences.
    m.analytic_partials = [A](const IndexSubset& u, const Eigen::VectorXd& x) {
        if (u.size() != 1) {
            throw CapabilityError("gsobol_mv: analytic partials cover |u| = 1 only");
        }
        const int j = u.indices()[0] - 1;
        Eigen::VectorXd out(A.rows());
        const double s = sign0(4.0 * x(j) - 2.0);
        for (int k = 0; k < A.rows(); ++k) {
            double prod = 4.0 * s / (1.0 + A(k, j));
            for (int i = 0; i < A.cols(); ++i) {
                if (i == j) continue;
                prod *= (std::abs(4.0 * x(i) - 2.0) + A(k, i)) / (1.0 + A(k, i));
            }
            out(k) = prod;
        }
        return out;
    };
    return m;
}

ModelSpec builtin_cdf_product(const CdfProductParams& params) {
    const int d = static_cast<int>(params.marginals.size());
    const int n = static_cast<int>(params.a.rows());
    if (d < 1) throw ValidationError("cdf_product: needs at least one marginal");
    if (params.a.cols() != d || params.b.rows() != n || params.b.cols() != d || n < 1) {
        throw ValidationError("cdf_product: a and b must both be N x d");
    }
    ModelSpec m;
    m.name = "cdf_product";
    m.d = d;
    m.n_out = n;
    m.space = InputSpace(params.marginals);
    const Eigen::MatrixXd a = params.a;
    const Eigen::MatrixXd b = params.b;
    const InputSpace space = m.space;
    m.evaluate_fn = [a, b, space](const Eigen::VectorXd& x) {
        Eigen::VectorXd out = Eigen::VectorXd::Ones(a.rows());
        for (int j = 0; j < a.cols(); ++j) {
            const double F = space.marginal(j).cdf(x(j));
            for (int k = 0; k < a.rows(); ++k) out(k) *= a(k, j) * F + b(k, j);
        }
        return out;
    };
    m.analytic_partials = [a, b, space](const IndexSubset& u, const Eigen::VectorXd& x) {
        Eigen::VectorXd out = Eigen::VectorXd::Ones(a.rows());
        for (int j = 0; j < a.cols(); ++j) {
            const Marginal& mj = space.marginal(j);
            if (u.contains(j + 1)) {
                const double rho = mj.pdf(x(j));
                for (int k = 0; k < a.rows(); ++k) out(k) *= a(k, j) * rho;
            } else {
                const double F = mj.cdf(x(j));
                for (int k = 0; k < a.rows(); ++k) out(k) *= a(k, j) * F + b(k, j);
            }
        }
        return out;
    };
    return m;
}

ModelSpec builtin(const std::string& name) {
    if (name == "ishigami") {
        Eigen::VectorXd a(1), b(1);
        a << 7.0;
        b << 0.1;
        return make_ishigami("ishigami", a, b);
    }
    if (name == "ishigami_mv") {
        Eigen::VectorXd a(3), b(3);
        a << 7.0, 5.896, 6.494;
        b << 0.1, 0.1, 0.125;
        return make_ishigami("ishigami_mv", a, b);
    }
    if (name == "block_additive") return make_block_additive();
    if (name == "gsobol_mv") return builtin_gsobol(gsobol_default_matrix());
    if (name == "cdf_product") {
        // Default instance: d = 2, N = 1, a = (1,1), b = (0,0) on uniform(0,1)^2.
        CdfProductParams p;
        p.a = Eigen::MatrixXd::Ones(1, 2);
        p.b = Eigen::MatrixXd::Zero(1, 2);
        p.marginals = {Marginal::uniform(0.0, 1.0), Marginal::uniform(0.0, 1.0)};
        return builtin_cdf_product(p);
    }
    throw ValidationError("unknown builtin model: " + name);
}

Eigen::VectorXd evaluate(const ModelSpec& model, const Eigen::VectorXd& x) {
    check_inside(model, x);
    return model.evaluate_fn(x);
}

Eigen::VectorXd analytic_partial(const ModelSpec& model, const IndexSubset& u,
                                 const Eigen::VectorXd& x) {
    check_subset_range(model, u);
    if (!model.has_analytic_partials()) {
        throw CapabilityError(model.name + ": no analytic cross-partials registered");
    }
    check_inside(model, x);
    return model.analytic_partials(u, x);
}

ModelSpec make_model(std::string name, InputSpace space, int n_out,
                     ModelSpec::Evaluate evaluate_fn, ModelSpec::Partial analytic_partials) {
    if (n_out < 1) throw ValidationError("make_model: n_out must be >= 1");
    if (!evaluate_fn) throw ValidationError("make_model: evaluate callable required");
    ModelSpec m;
    m.name = std::move(name);
    m.d = space.dimension();
    m.n_out = n_out;
    m.space = std::move(space);
    m.evaluate_fn = std::move(evaluate_fn);
    m.analytic_partials = std::move(analytic_partials);
    return m;
}

}  // namespace proxy_sa
