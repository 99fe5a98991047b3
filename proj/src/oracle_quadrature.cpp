#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "proxy_sa/errors.hpp"
#include "proxy_sa/gauss_legendre.hpp"
#include "proxy_sa/oracle.hpp"

namespace proxy_sa {

namespace {

constexpr int kInnerFullNodes = 48;
constexpr int kInnerTailNodes = 32;

// Cross-partial with the same analytic-first fallback as partial_stack, for
// single quadrature nodes.
Eigen::VectorXd cross_partial_any(const ModelSpec& model, const IndexSubset& u,
                                  const Eigen::VectorXd& x, DerivativeMode mode) {
    static const FDScheme scheme{};
    if (mode != DerivativeMode::FiniteDifference && model.has_analytic_partials()) {
        try {
            return model.analytic_partials(u, x);
        } catch (const CapabilityError&) {
            if (mode == DerivativeMode::Analytic) throw;
        }
    } else if (mode == DerivativeMode::Analytic) {
        throw CapabilityError(model.name + ": no analytic cross-partials registered");
    }
    return cross_partial_fd(model, u, x, scheme);
}

// Evaluation context on the unit cube: x_j = Q_j(t_j).
struct UnitEval {
    const ModelSpec* model;
    DerivativeMode mode;

    Eigen::VectorXd to_x(const Eigen::VectorXd& t) const {
        Eigen::VectorXd x(model->d);
        for (int j = 0; j < model->d; ++j) x(j) = model->space.marginal(j).quantile(t(j));
        return x;
    }

    Eigen::VectorXd value(const Eigen::VectorXd& t) const { return model->evaluate_fn(to_x(t)); }

    // d^{|u|} f / dx_u (Q(t)) / prod_{j in u} rho_j(Q_j(t_j)); in unit
    // coordinates this is the derivative d^{|u|} (f o Q) / dt_u.
    Eigen::VectorXd deriv_over_rho(const IndexSubset& u, const Eigen::VectorXd& t) const {
        const Eigen::VectorXd x = to_x(t);
        Eigen::VectorXd v = cross_partial_any(*model, u, x, mode);
        for (int j : u.indices()) {
            const double rho = model->space.marginal(j - 1).pdf(x(j - 1));
            if (!(rho > 0.0)) {
                throw SingularityError(model->name + ": density vanishes at a quadrature node");
            }
            v /= rho;
        }
        return v;
    }
};

void require_low_dimension(const ModelSpec& model, int limit, const char* what) {
    if (model.d > limit) {
        throw CapabilityError(std::string(what) + ": requires d <= " + std::to_string(limit) +
                              ", model has d = " + std::to_string(model.d));
    }
}

// Tail rule on (a, 1) derived from a cached unit rule.
QuadratureRule tail_rule(const QuadratureRule& unit, double a) {
    QuadratureRule out;
    const int n = unit.size();
    out.nodes.resize(n);
    out.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        out.nodes[i] = a + (1.0 - a) * unit.nodes[i];
        out.weights[i] = (1.0 - a) * unit.weights[i];
    }
    return out;
}

// Enumerates the tensor grid over (0,1)^d of a per-axis rule and applies fn
// to (t, weight).
template <typename Fn>
void for_tensor(const QuadratureRule& rule, int d, Fn&& fn) {
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    Eigen::VectorXd t(d);
    for (;;) {
        double w = 1.0;
        for (int j = 0; j < d; ++j) {
            t(j) = rule.nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
            w *= rule.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
        }
        fn(t, w);
        int j = 0;
        for (; j < d; ++j) {
            if (++idx[static_cast<std::size_t>(j)] < rule.size()) break;
            idx[static_cast<std::size_t>(j)] = 0;
        }
        if (j == d) return;
    }
}

}  // namespace

CovMatrix quadrature_variance(const ModelSpec& model, int nodes) {
    require_low_dimension(model, 2, "quadrature_variance");
    const QuadratureRule rule = gauss_legendre_unit(nodes);
    UnitEval eval{&model, DerivativeMode::Auto};
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(model.n_out, model.n_out);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(model.n_out);
    for_tensor(rule, model.d, [&](const Eigen::VectorXd& t, double w) {
        const Eigen::VectorXd f = eval.value(t);
        second.noalias() += w * f * f.transpose();
        mean.noalias() += w * f;
    });
    return CovMatrix(second - mean * mean.transpose());
}

CovMatrix quadrature_nub(const ModelSpec& model, const IndexSubset& u, int nodes,
                         DerivativeMode mode) {
    require_low_dimension(model, 2, "quadrature_nub");
    if (u.indices().back() > model.d) throw ValidationError("quadrature_nub: subset exceeds d");
    const QuadratureRule rule = gauss_legendre_unit(nodes);
    UnitEval eval{&model, mode};
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(model.n_out, model.n_out);
    for_tensor(rule, model.d, [&](const Eigen::VectorXd& t, double w) {
        const Eigen::VectorXd dv = eval.deriv_over_rho(u, t);
        double weight = 1.0;
        for (int j : u.indices()) weight *= t(j - 1) * (1.0 - t(j - 1));
        acc.noalias() += (w * weight) * dv * dv.transpose();
    });
    acc /= std::ldexp(1.0, u.size());
    return CovMatrix(0.5 * (acc + acc.transpose()));
}

CovMatrix quadrature_tief_variance(const ModelSpec& model, const IndexSubset& u, int nodes,
                                   DerivativeMode mode) {
    require_low_dimension(model, 2, "quadrature_tief_variance");
    if (u.indices().back() > model.d) {
        throw ValidationError("quadrature_tief_variance: subset exceeds d");
    }
    const QuadratureRule outer = gauss_legendre_unit(nodes);
    const QuadratureRule inner_unit = gauss_legendre_unit(kInnerTailNodes);
    UnitEval eval{&model, mode};
    const std::vector<int>& uidx = u.indices();
    const int nu = u.size();

    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(model.n_out, model.n_out);
    for_tensor(outer, model.d, [&](const Eigen::VectorXd& t, double w) {
        const Eigen::VectorXd a = eval.deriv_over_rho(u, t);

        // Inner integral over t'_u of D_u(t'_u, t_{~u}) prod kappa(t_k, t'_k),
        // kappa = min(t,t') - t t'; each axis split at t_k so the integrand is
        // smooth on every panel.
        Eigen::VectorXd b = Eigen::VectorXd::Zero(model.n_out);
        for (int panel_mask = 0; panel_mask < (1 << nu); ++panel_mask) {
            std::vector<const QuadratureRule*> per_axis(static_cast<std::size_t>(nu));
            std::vector<QuadratureRule> storage(static_cast<std::size_t>(nu));
            bool empty = false;
            for (int k = 0; k < nu; ++k) {
                const double tk = t(uidx[static_cast<std::size_t>(k)] - 1);
                const bool upper = panel_mask & (1 << k);
                const double lo = upper ? tk : 0.0;
                const double hi = upper ? 1.0 : tk;
                if (hi - lo <= 0.0) {
                    empty = true;
                    break;
                }
                QuadratureRule r;
                r.nodes.resize(inner_unit.size());
                r.weights.resize(inner_unit.size());
                for (int i = 0; i < inner_unit.size(); ++i) {
                    r.nodes[static_cast<std::size_t>(i)] =
                        lo + (hi - lo) * inner_unit.nodes[static_cast<std::size_t>(i)];
                    r.weights[static_cast<std::size_t>(i)] =
                        (hi - lo) * inner_unit.weights[static_cast<std::size_t>(i)];
                }
                storage[static_cast<std::size_t>(k)] = std::move(r);
                per_axis[static_cast<std::size_t>(k)] = &storage[static_cast<std::size_t>(k)];
            }
            if (empty) continue;

            std::vector<int> idx(static_cast<std::size_t>(nu), 0);
            Eigen::VectorXd tp = t;
            for (;;) {
                double kernel_w = 1.0;
                for (int k = 0; k < nu; ++k) {
                    const QuadratureRule& r = *per_axis[static_cast<std::size_t>(k)];
                    const double tpk = r.nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
                    const double tk = t(uidx[static_cast<std::size_t>(k)] - 1);
                    tp(uidx[static_cast<std::size_t>(k)] - 1) = tpk;
                    kernel_w *= (std::min(tk, tpk) - tk * tpk) *
                                r.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
                }
                b.noalias() += kernel_w * eval.deriv_over_rho(u, tp);
                int k = 0;
                for (; k < nu; ++k) {
                    if (++idx[static_cast<std::size_t>(k)] <
                        per_axis[static_cast<std::size_t>(k)]->size()) {
                        break;
                    }
                    idx[static_cast<std::size_t>(k)] = 0;
                }
                if (k == nu) break;
            }
        }
        acc.noalias() += w * a * b.transpose();
    });
    return CovMatrix(0.5 * (acc + acc.transpose()));
}

EqualityReport verify_variance_identity(const ModelSpec& model, const IndexSubset& u, int nodes,
                                        double tolerance, DerivativeMode mode) {
    const IdentityExpectation expectation = (model.name == "cdf_product")
                                                ? IdentityExpectation::Equality
                                                : IdentityExpectation::UpperBound;
    return verify_variance_identity(model, u, nodes, tolerance, expectation, mode);
}

EqualityReport verify_variance_identity(const ModelSpec& model, const IndexSubset& u, int nodes,
                                        double tolerance, IdentityExpectation expectation,
                                        DerivativeMode mode) {
    require_low_dimension(model, 2, "verify_variance_identity");
    const CovMatrix lhs = quadrature_tief_variance(model, u, nodes, mode);
    const CovMatrix rhs = quadrature_nub(model, u, nodes, mode);

    EqualityReport report;
    report.statement = "variance-identity:" + model.name + ":u=" + u.to_string();
    report.lhs = lhs.trace();
    report.rhs = rhs.trace();
    report.tolerance = tolerance;
    if (expectation == IdentityExpectation::Equality) {
        report.residual = (lhs.matrix() - rhs.matrix()).cwiseAbs().maxCoeff();
    } else {
        report.statement += ":bound";
        const CovMatrix gap = rhs - lhs;
        report.residual = std::max(0.0, -gap.min_eigenvalue());
    }
    return report;
}

namespace {

struct AnovaGrids {
    int n = 0;
    int n_out = 0;
    std::vector<Eigen::VectorXd> f1, f2;   // size n
    std::vector<Eigen::VectorXd> f12;      // size n*n, row-major (a*n + b)
};

// Derivative-route components of the d = 2 functional ANOVA on the unit
// square. Indicator kernels are split as
//   int K(t',t) g(t') dt' = int t' g(t') dt' - int_t^1 g(t') dt',
// with the tail integrals on per-outer-node Gauss-Legendre panels.
AnovaGrids anova_component_grids(const ModelSpec& model, const QuadratureRule& outer,
                                 DerivativeMode mode) {
    const int n = outer.size();
    const int n_out = model.n_out;
    UnitEval eval{&model, mode};
    const IndexSubset u1 = IndexSubset::singleton(1);
    const IndexSubset u2 = IndexSubset::singleton(2);
    const IndexSubset u12 = IndexSubset::of({1, 2});

    const QuadratureRule full = gauss_legendre_unit(kInnerFullNodes);
    const QuadratureRule tail_unit = gauss_legendre_unit(kInnerTailNodes);
    auto point = [](double t1, double t2) {
        Eigen::VectorXd t(2);
        t << t1, t2;
        return t;
    };

    // Moment parts on the fixed full grid.
    Eigen::VectorXd a1f = Eigen::VectorXd::Zero(n_out);  // int int t'_1 D1 dt'
    Eigen::VectorXd a2f = Eigen::VectorXd::Zero(n_out);
    Eigen::VectorXd m12 = Eigen::VectorXd::Zero(n_out);  // int int t'_1 t'_2 D12 dt'
    for (int i = 0; i < full.size(); ++i) {
        for (int j = 0; j < full.size(); ++j) {
            const double w = full.weights[static_cast<std::size_t>(i)] *
                             full.weights[static_cast<std::size_t>(j)];
            const Eigen::VectorXd t = point(full.nodes[static_cast<std::size_t>(i)],
                                            full.nodes[static_cast<std::size_t>(j)]);
            a1f += w * full.nodes[static_cast<std::size_t>(i)] * eval.deriv_over_rho(u1, t);
            a2f += w * full.nodes[static_cast<std::size_t>(j)] * eval.deriv_over_rho(u2, t);
            m12 += w * full.nodes[static_cast<std::size_t>(i)] *
                   full.nodes[static_cast<std::size_t>(j)] * eval.deriv_over_rho(u12, t);
        }
    }

    // Tail integrals depending on one outer node.
    std::vector<Eigen::VectorXd> b1f(static_cast<std::size_t>(n)),  // int_{ta}^1 dt'_1 int D1 dt'_2
        b2f(static_cast<std::size_t>(n)),
        p1(static_cast<std::size_t>(n)),  // int_{ta}^1 dt'_1 int t'_2 D12 dt'_2
        p2(static_cast<std::size_t>(n)),
        a1_pin(static_cast<std::size_t>(n)),  // int t'_1 D1(t'_1, tb) dt'_1
        a2_pin(static_cast<std::size_t>(n));
    std::vector<QuadratureRule> tails(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        tails[static_cast<std::size_t>(a)] =
            tail_rule(tail_unit, outer.nodes[static_cast<std::size_t>(a)]);
    }

    for (int a = 0; a < n; ++a) {
        const QuadratureRule& tr = tails[static_cast<std::size_t>(a)];
        Eigen::VectorXd acc_b1 = Eigen::VectorXd::Zero(n_out);
        Eigen::VectorXd acc_b2 = Eigen::VectorXd::Zero(n_out);
        Eigen::VectorXd acc_p1 = Eigen::VectorXd::Zero(n_out);
        Eigen::VectorXd acc_p2 = Eigen::VectorXd::Zero(n_out);
        for (int i = 0; i < tr.size(); ++i) {
            for (int j = 0; j < full.size(); ++j) {
                const double wij = tr.weights[static_cast<std::size_t>(i)] *
                                   full.weights[static_cast<std::size_t>(j)];
                // Tail on axis 1, full on axis 2.
                const Eigen::VectorXd ta = point(tr.nodes[static_cast<std::size_t>(i)],
                                                 full.nodes[static_cast<std::size_t>(j)]);
                acc_b1 += wij * eval.deriv_over_rho(u1, ta);
                acc_p1 += wij * full.nodes[static_cast<std::size_t>(j)] *
                          eval.deriv_over_rho(u12, ta);
                // Tail on axis 2, full on axis 1.
                const Eigen::VectorXd tb = point(full.nodes[static_cast<std::size_t>(j)],
                                                 tr.nodes[static_cast<std::size_t>(i)]);
                acc_b2 += wij * eval.deriv_over_rho(u2, tb);
                acc_p2 += wij * full.nodes[static_cast<std::size_t>(j)] *
                          eval.deriv_over_rho(u12, tb);
            }
        }
        b1f[static_cast<std::size_t>(a)] = acc_b1;
        b2f[static_cast<std::size_t>(a)] = acc_b2;
        p1[static_cast<std::size_t>(a)] = acc_p1;
        p2[static_cast<std::size_t>(a)] = acc_p2;

        // Pinned one-axis moment integrals for the T1/T2 terms of f12.
        Eigen::VectorXd acc_a1 = Eigen::VectorXd::Zero(n_out);
        Eigen::VectorXd acc_a2 = Eigen::VectorXd::Zero(n_out);
        for (int i = 0; i < full.size(); ++i) {
            const double node = full.nodes[static_cast<std::size_t>(i)];
            const double w = full.weights[static_cast<std::size_t>(i)];
            acc_a1 += w * node *
                      eval.deriv_over_rho(u1, point(node, outer.nodes[static_cast<std::size_t>(a)]));
            acc_a2 += w * node *
                      eval.deriv_over_rho(u2, point(outer.nodes[static_cast<std::size_t>(a)], node));
        }
        a1_pin[static_cast<std::size_t>(a)] = acc_a1;
        a2_pin[static_cast<std::size_t>(a)] = acc_a2;
    }

    AnovaGrids grids;
    grids.n = n;
    grids.n_out = n_out;
    grids.f1.resize(static_cast<std::size_t>(n));
    grids.f2.resize(static_cast<std::size_t>(n));
    grids.f12.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
                     Eigen::VectorXd::Zero(n_out));
    for (int a = 0; a < n; ++a) {
        grids.f1[static_cast<std::size_t>(a)] = a1f - b1f[static_cast<std::size_t>(a)];
        grids.f2[static_cast<std::size_t>(a)] = a2f - b2f[static_cast<std::size_t>(a)];
    }

    // Pinned tail integrals (both axes involved) and assembly of f12.
    for (int a = 0; a < n; ++a) {
        const QuadratureRule& tra = tails[static_cast<std::size_t>(a)];
        for (int b = 0; b < n; ++b) {
            const QuadratureRule& trb = tails[static_cast<std::size_t>(b)];
            Eigen::VectorXd b1_pin = Eigen::VectorXd::Zero(n_out);  // int_{ta}^1 D1(t'_1, tb)
            Eigen::VectorXd b2_pin = Eigen::VectorXd::Zero(n_out);
            Eigen::VectorXd corner = Eigen::VectorXd::Zero(n_out);  // int_{ta}^1 int_{tb}^1 D12
            for (int i = 0; i < tra.size(); ++i) {
                b1_pin += tra.weights[static_cast<std::size_t>(i)] *
                          eval.deriv_over_rho(u1, point(tra.nodes[static_cast<std::size_t>(i)],
                                                        outer.nodes[static_cast<std::size_t>(b)]));
                for (int j = 0; j < trb.size(); ++j) {
                    corner += tra.weights[static_cast<std::size_t>(i)] *
                              trb.weights[static_cast<std::size_t>(j)] *
                              eval.deriv_over_rho(u12,
                                                  point(tra.nodes[static_cast<std::size_t>(i)],
                                                        trb.nodes[static_cast<std::size_t>(j)]));
                }
            }
            for (int j = 0; j < trb.size(); ++j) {
                b2_pin += trb.weights[static_cast<std::size_t>(j)] *
                          eval.deriv_over_rho(u2, point(outer.nodes[static_cast<std::size_t>(a)],
                                                        trb.nodes[static_cast<std::size_t>(j)]));
            }
            const Eigen::VectorXd t1_term = a1_pin[static_cast<std::size_t>(b)] - b1_pin;
            const Eigen::VectorXd t2_term = a2_pin[static_cast<std::size_t>(a)] - b2_pin;
            const Eigen::VectorXd t12_term = m12 - p1[static_cast<std::size_t>(a)] -
                                             p2[static_cast<std::size_t>(b)] + corner;
            grids.f12[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) +
                      static_cast<std::size_t>(b)] =
                t1_term + t2_term + t12_term - grids.f1[static_cast<std::size_t>(a)] -
                grids.f2[static_cast<std::size_t>(b)];
        }
    }
    return grids;
}

}  // namespace

std::vector<EqualityReport> verify_anova_structure(const ModelSpec& model, int nodes,
                                                   double tolerance, DerivativeMode mode) {
    if (model.d != 2) {
        throw CapabilityError("verify_anova_structure: requires d = 2, model has d = " +
                              std::to_string(model.d));
    }
    const QuadratureRule outer = gauss_legendre_unit(nodes);
    const AnovaGrids g = anova_component_grids(model, outer, mode);
    const int n = g.n;
    const int n_out = g.n_out;
    auto wt = [&](int a) { return outer.weights[static_cast<std::size_t>(a)]; };
    auto f12_at = [&](int a, int b) -> const Eigen::VectorXd& {
        return g.f12[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) +
                     static_cast<std::size_t>(b)];
    };

    std::vector<EqualityReport> reports;
    auto add = [&](const std::string& statement, double lhs, double rhs, double residual) {
        reports.push_back({statement + " [" + model.name + "]", lhs, rhs, residual, tolerance});
    };

    // Centering.
    {
        Eigen::VectorXd c1 = Eigen::VectorXd::Zero(n_out);
        Eigen::VectorXd c2 = Eigen::VectorXd::Zero(n_out);
        for (int a = 0; a < n; ++a) {
            c1 += wt(a) * g.f1[static_cast<std::size_t>(a)];
            c2 += wt(a) * g.f2[static_cast<std::size_t>(a)];
        }
        add("centering:f1", c1.cwiseAbs().maxCoeff(), 0.0, c1.cwiseAbs().maxCoeff());
        add("centering:f2", c2.cwiseAbs().maxCoeff(), 0.0, c2.cwiseAbs().maxCoeff());
        double worst1 = 0.0, worst2 = 0.0;
        for (int b = 0; b < n; ++b) {
            Eigen::VectorXd c = Eigen::VectorXd::Zero(n_out);
            for (int a = 0; a < n; ++a) c += wt(a) * f12_at(a, b);
            worst1 = std::max(worst1, c.cwiseAbs().maxCoeff());
        }
        for (int a = 0; a < n; ++a) {
            Eigen::VectorXd c = Eigen::VectorXd::Zero(n_out);
            for (int b = 0; b < n; ++b) c += wt(b) * f12_at(a, b);
            worst2 = std::max(worst2, c.cwiseAbs().maxCoeff());
        }
        add("centering:f12:mu1", worst1, 0.0, worst1);
        add("centering:f12:mu2", worst2, 0.0, worst2);
    }

    // Orthogonality.
    {
        Eigen::MatrixXd o12 = Eigen::MatrixXd::Zero(n_out, n_out);
        Eigen::MatrixXd o1_12 = Eigen::MatrixXd::Zero(n_out, n_out);
        Eigen::MatrixXd o2_12 = Eigen::MatrixXd::Zero(n_out, n_out);
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                const double w = wt(a) * wt(b);
                o12.noalias() += w * g.f1[static_cast<std::size_t>(a)] *
                                 g.f2[static_cast<std::size_t>(b)].transpose();
                o1_12.noalias() +=
                    w * g.f1[static_cast<std::size_t>(a)] * f12_at(a, b).transpose();
                o2_12.noalias() +=
                    w * g.f2[static_cast<std::size_t>(b)] * f12_at(a, b).transpose();
            }
        }
        add("orthogonality:f1:f2", o12.cwiseAbs().maxCoeff(), 0.0, o12.cwiseAbs().maxCoeff());
        add("orthogonality:f1:f12", o1_12.cwiseAbs().maxCoeff(), 0.0, o1_12.cwiseAbs().maxCoeff());
        add("orthogonality:f2:f12", o2_12.cwiseAbs().maxCoeff(), 0.0, o2_12.cwiseAbs().maxCoeff());
    }

    // Variance decomposition.
    {
        auto moments = [&](auto&& value_at, int count1, int count2) {
            Eigen::MatrixXd second = Eigen::MatrixXd::Zero(n_out, n_out);
            Eigen::VectorXd mean = Eigen::VectorXd::Zero(n_out);
            for (int a = 0; a < count1; ++a) {
                for (int b = 0; b < count2; ++b) {
                    const double w = wt(a) * (count2 > 1 ? wt(b) : 1.0);
                    const Eigen::VectorXd v = value_at(a, b);
                    second.noalias() += w * v * v.transpose();
                    mean.noalias() += w * v;
                }
            }
            return Eigen::MatrixXd(second - mean * mean.transpose());
        };
        const Eigen::MatrixXd var1 =
            moments([&](int a, int) { return g.f1[static_cast<std::size_t>(a)]; }, n, 1);
        const Eigen::MatrixXd var2 =
            moments([&](int a, int) { return g.f2[static_cast<std::size_t>(a)]; }, n, 1);
        const Eigen::MatrixXd var12 = moments([&](int a, int b) { return f12_at(a, b); }, n, n);
        const Eigen::MatrixXd var_f = quadrature_variance(model, nodes).matrix();
        const Eigen::MatrixXd gap = var_f - (var1 + var2 + var12);
        add("variance-sum", var_f.trace(), (var1 + var2 + var12).trace(),
            gap.cwiseAbs().maxCoeff());
    }
    return reports;
}

}  // namespace proxy_sa
