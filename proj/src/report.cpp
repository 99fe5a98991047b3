#include "proxy_sa/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "proxy_sa/bounds.hpp"
#include "proxy_sa/errors.hpp"

namespace proxy_sa {

namespace {

constexpr const char* kVersion = "proxy_sa 0.1.0";

using nlohmann::json;

Marginal marginal_from_json(const json& j) {
    const std::string kind = j.value("kind", "uniform");
    if (kind != "uniform") {
        throw ValidationError("config marginals support kind=uniform only; user-defined "
                              "marginals are registered through the library API");
    }
    if (!j.contains("lo") || !j.contains("hi")) {
        throw ValidationError("uniform marginal config requires lo and hi");
    }
    return Marginal::uniform(j["lo"].get<double>(), j["hi"].get<double>());
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.empty()) throw ValidationError(std::string(what) + ": expected array");
    if (j[0].is_array()) {
        const int rows = static_cast<int>(j.size());
        const int cols = static_cast<int>(j[0].size());
        Eigen::MatrixXd m(rows, cols);
        for (int r = 0; r < rows; ++r) {
            if (static_cast<int>(j[r].size()) != cols) {
                throw ValidationError(std::string(what) + ": ragged rows");
            }
            for (int c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
        }
        return m;
    }
    Eigen::MatrixXd m(1, static_cast<int>(j.size()));
    for (int c = 0; c < static_cast<int>(j.size()); ++c) m(0, c) = j[c].get<double>();
    return m;
}

std::vector<IndexSubset> parse_subset_list(const std::string& text) {
    std::vector<IndexSubset> out;
    std::istringstream is(text);
    std::string token;
    while (std::getline(is, token, ';')) {
        if (!token.empty()) out.push_back(IndexSubset::parse(token));
    }
    if (out.empty()) throw ValidationError("subset list is empty: " + text);
    return out;
}

std::string format_cell(const std::optional<double>& v) {
    if (!v) return "";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", *v);
    return buf;
}

}  // namespace

StudyConfig parse_study_config(const json& j) {
    StudyConfig config;
    config.model = j.value("model", std::string("ishigami"));
    config.params_json = j.value("params", json::object()).dump();

    StudyOptions& o = config.options;
    const std::string sampler = j.value("sampler", std::string("sobol"));
    if (sampler == "sobol") {
        o.sampler = Generator::Sobol;
    } else if (sampler == "prng") {
        o.sampler = Generator::Prng;
    } else {
        throw ValidationError("sampler must be sobol or prng, got " + sampler);
    }
    o.m = j.value("m", 1000);
    o.seed = j.value("seed", 0ULL);
    o.skip = j.value("skip", 0ULL);
    o.replicates = j.value("replicates", 30);
    if (o.m < 2) throw ValidationError("config: m >= 2 required");
    if (o.replicates < 1) throw ValidationError("config: replicates >= 1 required");

    const std::string deriv = j.value("derivatives", std::string("auto"));
    if (deriv == "auto") {
        o.derivatives = DerivativeMode::Auto;
    } else if (deriv == "analytic") {
        o.derivatives = DerivativeMode::Analytic;
    } else if (deriv == "fd") {
        o.derivatives = DerivativeMode::FiniteDifference;
    } else {
        throw ValidationError("derivatives must be auto, analytic or fd");
    }
    o.scheme.rel_step = j.value("fd_step", 1e-5);
    o.order = j.value("order", 1);
    if (j.contains("subsets")) o.subsets = parse_subset_list(j["subsets"].get<std::string>());

    config.out_path = j.value("out", std::string());
    const std::string format = j.value("format", std::string("csv"));
    if (format == "csv") {
        config.format = ReportFormat::Csv;
    } else if (format == "json") {
        config.format = ReportFormat::Json;
    } else {
        throw ValidationError("format must be csv or json");
    }
    return config;
}

StudyConfig load_study_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    in >> j;
    return parse_study_config(j);
}

ModelSpec model_from_config(const StudyConfig& config) {
    const json params = json::parse(config.params_json);
    if (config.model == "gsobol_mv") {
        if (params.contains("A") && params["A"].is_array()) {
            return builtin_gsobol(matrix_from_json(params["A"], "gsobol A"));
        }
        return builtin("gsobol_mv");
    }
    if (config.model == "cdf_product" && !params.empty()) {
        CdfProductParams p;
        if (!params.contains("a") || !params.contains("b")) {
            throw ValidationError("cdf_product params require a and b");
        }
        p.a = matrix_from_json(params["a"], "cdf_product a");
        p.b = matrix_from_json(params["b"], "cdf_product b");
        if (params.contains("marginals")) {
            for (const json& mj : params["marginals"]) p.marginals.push_back(marginal_from_json(mj));
        } else {
            for (int j = 0; j < p.a.cols(); ++j) p.marginals.push_back(Marginal::uniform(0.0, 1.0));
        }
        return builtin_cdf_product(p);
    }
    return builtin(config.model);
}

namespace {

std::vector<ReferenceIndex> references_for(const StudyConfig& config) {
    try {
        if (config.model == "gsobol_mv" || config.model == "cdf_product") {
            const ModelSpec model = model_from_config(config);
            const json params = json::parse(config.params_json);
            if (config.model == "gsobol_mv") {
                return gsobol_reference(params.contains("A") && params["A"].is_array()
                                            ? matrix_from_json(params["A"], "gsobol A")
                                            : gsobol_default_matrix());
            }
            CdfProductParams p;
            if (params.contains("a")) {
                p.a = matrix_from_json(params["a"], "a");
                p.b = matrix_from_json(params["b"], "b");
            } else {
                p.a = Eigen::MatrixXd::Ones(1, 2);
                p.b = Eigen::MatrixXd::Zero(1, 2);
            }
            for (int j = 0; j < p.a.cols(); ++j) {
                p.marginals.push_back(model.space.marginal(j));
            }
            return cdf_product_reference(p);
        }
        return closed_form_reference(config.model);
    } catch (const CapabilityError&) {
        return {};
    }
}

std::optional<double> lookup_reference(const std::vector<ReferenceIndex>& refs,
                                       const IndexSubset& subset, bool second_type) {
    const ReferenceIndex::Kind kind = subset.size() == 1
                                          ? ReferenceIndex::Kind::Total
                                          : ReferenceIndex::Kind::TotalInteraction;
    for (const ReferenceIndex& r : refs) {
        if (r.subset == subset && r.kind == kind) {
            return second_type ? r.value_second_type : r.value_first_type;
        }
    }
    return std::nullopt;
}

}  // namespace

ReportTable run_study(const StudyConfig& config, bool with_bounds) {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelSpec model = model_from_config(config);

    StudyOptions options = config.options;
    options.with_dgsm = with_bounds;
    const StudyResult result = replicate_study(model, options);
    const std::vector<ReferenceIndex> refs = references_for(config);

    std::vector<PoincareConstants> constants;
    if (with_bounds && model.n_out == 1) {
        constants.reserve(static_cast<std::size_t>(model.d));
        for (int j = 0; j < model.d; ++j) {
            constants.push_back(poincare_constants(model.space.marginal(j)));
        }
    }

    ReportTable table;
    table.version = kVersion;
    {
        json echo;
        echo["model"] = config.model;
        echo["params"] = json::parse(config.params_json);
        echo["sampler"] = config.options.sampler == Generator::Sobol ? "sobol" : "prng";
        echo["m"] = config.options.m;
        echo["seed"] = config.options.seed;
        echo["skip"] = config.options.skip;
        echo["replicates"] = config.options.replicates;
        echo["order"] = config.options.order;
        table.config_echo = echo.dump();
    }

    std::vector<const SubsetAggregate*> ordered;
    for (const SubsetAggregate& agg : result.per_subset) ordered.push_back(&agg);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const SubsetAggregate* a, const SubsetAggregate* b) {
                         if (a->subset.size() != b->subset.size()) {
                             return a->subset.size() < b->subset.size();
                         }
                         return a->subset < b->subset;
                     });

    for (const SubsetAggregate* agg : ordered) {
        std::optional<double> bound;
        if (with_bounds && model.n_out == 1) {
            bound = classical_bound(
                CovMatrix(Eigen::MatrixXd::Constant(1, 1, agg->mean_dgsm_trace)), constants,
                agg->subset, result.mean_sigma_trace);
        }
        for (const bool second : {false, true}) {
            ReportRow row;
            row.subset = agg->subset;
            row.kind = agg->subset.size() == 1 ? "total" : "total_interaction";
            row.true_index = lookup_reference(refs, agg->subset, second);
            row.classical_bound = bound;
            row.proxy_mean = second ? agg->mean_second : agg->mean_first;
            row.proxy_std = second ? agg->std_second : agg->std_first;
            row.estimator = second ? "second" : "first";
            row.m = config.options.m;
            row.replicates = config.options.replicates;
            row.deriv_source = to_string(agg->source);
            table.rows.push_back(std::move(row));
        }
    }

    table.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return table;
}

std::string render_csv(const ReportTable& table) {
    std::string out =
        "subset,kind,true_index,classical_bound,proxy_mean,proxy_std,estimator,m,R,deriv_source\n";
    for (const ReportRow& row : table.rows) {
        out += row.subset.to_string();
        out += ',' + row.kind;
        out += ',' + format_cell(row.true_index);
        out += ',' + format_cell(row.classical_bound);
        out += ',' + format_cell(row.proxy_mean);
        out += ',' + format_cell(row.proxy_std);
        out += ',' + row.estimator;
        out += ',' + std::to_string(row.m);
        out += ',' + std::to_string(row.replicates);
        out += ',' + row.deriv_source;
        out += '\n';
    }
    return out;
}

json to_json(const ReportTable& table) {
    json j;
    j["metadata"] = {{"config", json::parse(table.config_echo.empty() ? "{}" : table.config_echo)},
                     {"version", table.version},
                     {"wall_time_seconds", table.wall_time_seconds}};
    j["rows"] = json::array();
    for (const ReportRow& row : table.rows) {
        json r;
        r["subset"] = row.subset.to_string();
        r["kind"] = row.kind;
        r["true_index"] = row.true_index ? json(*row.true_index) : json();
        r["classical_bound"] = row.classical_bound ? json(*row.classical_bound) : json();
        r["proxy_mean"] = row.proxy_mean;
        r["proxy_std"] = row.proxy_std;
        r["estimator"] = row.estimator;
        r["m"] = row.m;
        r["R"] = row.replicates;
        r["deriv_source"] = row.deriv_source;
        j["rows"].push_back(std::move(r));
    }
    return j;
}

void write_report(const ReportTable& table, const std::string& path, ReportFormat format) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file for writing: " + path);
    if (format == ReportFormat::Csv) {
        out << render_csv(table);
    } else {
        out << to_json(table).dump(2) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

ReportTable read_report_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open report file: " + path);
    json j;
    in >> j;
    ReportTable table;
    table.version = j["metadata"].value("version", "");
    table.wall_time_seconds = j["metadata"].value("wall_time_seconds", 0.0);
    table.config_echo = j["metadata"]["config"].dump();
    for (const json& r : j["rows"]) {
        ReportRow row;
        row.subset = IndexSubset::parse(r["subset"].get<std::string>());
        row.kind = r["kind"].get<std::string>();
        if (!r["true_index"].is_null()) row.true_index = r["true_index"].get<double>();
        if (!r["classical_bound"].is_null()) {
            row.classical_bound = r["classical_bound"].get<double>();
        }
        row.proxy_mean = r["proxy_mean"].get<double>();
        row.proxy_std = r["proxy_std"].get<double>();
        row.estimator = r["estimator"].get<std::string>();
        row.m = r["m"].get<int>();
        row.replicates = r["R"].get<int>();
        row.deriv_source = r["deriv_source"].get<std::string>();
        table.rows.push_back(std::move(row));
    }
    return table;
}

// ---------------------------------------------------------------------------
// Verification suites

namespace {

ModelSpec additive_two_input_model() {
    return make_model(
        "additive2", InputSpace::uniform(0.0, 1.0, 2), 1,
        [](const Eigen::VectorXd& x) {
            Eigen::VectorXd out(1);
            out(0) = x(0) + x(1);
            return out;
        },
        [](const IndexSubset& u, const Eigen::VectorXd&) {
            Eigen::VectorXd out(1);
            out(0) = u.size() == 1 ? 1.0 : 0.0;
            return out;
        });
}

ModelSpec sine_model() {
    return make_model(
        "sin1d", InputSpace::uniform(-M_PI, M_PI, 1), 1,
        [](const Eigen::VectorXd& x) {
            Eigen::VectorXd out(1);
            out(0) = std::sin(x(0));
            return out;
        },
        [](const IndexSubset&, const Eigen::VectorXd& x) {
            Eigen::VectorXd out(1);
            out(0) = std::cos(x(0));
            return out;
        });
}

// Random trigonometric polynomial of degree <= 4 on uniform(-pi,pi).
ModelSpec trig_poly_model(std::mt19937_64& rng, int id) {
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    const double c0 = coeff(rng);
    std::vector<double> a(4), b(4);
    for (int k = 0; k < 4; ++k) {
        a[static_cast<std::size_t>(k)] = coeff(rng);
        b[static_cast<std::size_t>(k)] = coeff(rng);
    }
    return make_model(
        "trig_poly_" + std::to_string(id), InputSpace::uniform(-M_PI, M_PI, 1), 1,
        [c0, a, b](const Eigen::VectorXd& x) {
            double v = c0;
            for (int k = 1; k <= 4; ++k) {
                v += a[static_cast<std::size_t>(k - 1)] * std::cos(k * x(0)) +
                     b[static_cast<std::size_t>(k - 1)] * std::sin(k * x(0));
            }
            Eigen::VectorXd out(1);
            out(0) = v;
            return out;
        },
        [a, b](const IndexSubset&, const Eigen::VectorXd& x) {
            double v = 0.0;
            for (int k = 1; k <= 4; ++k) {
                v += k * (-a[static_cast<std::size_t>(k - 1)] * std::sin(k * x(0)) +
                          b[static_cast<std::size_t>(k - 1)] * std::cos(k * x(0)));
            }
            Eigen::VectorXd out(1);
            out(0) = v;
            return out;
        });
}

ModelSpec affine_cdf_1d(double a, double b) {
    CdfProductParams p;
    p.a = Eigen::MatrixXd::Constant(1, 1, a);
    p.b = Eigen::MatrixXd::Constant(1, 1, b);
    p.marginals = {Marginal::uniform(0.0, 1.0)};
    return builtin_cdf_product(p);
}

}  // namespace

std::vector<EqualityReport> verify_suite(const std::string& scope) {
    const bool all = scope == "all";
    if (!all && scope != "equalities" && scope != "anova" && scope != "inequalities") {
        throw ValidationError("verify scope must be equalities, anova, inequalities or all");
    }
    std::vector<EqualityReport> reports;

    if (all || scope == "equalities") {
        reports.push_back(verify_variance_identity(affine_cdf_1d(2.0, 1.0),
                                                   IndexSubset::singleton(1), 128, 1e-10));
        const ModelSpec product = builtin("cdf_product");
        reports.push_back(
            verify_variance_identity(product, IndexSubset::singleton(1), 64, 1e-10));
        reports.push_back(
            verify_variance_identity(product, IndexSubset::singleton(2), 64, 1e-10));
        reports.push_back(
            verify_variance_identity(product, IndexSubset::of({1, 2}), 64, 1e-10));
        reports.push_back(
            verify_variance_identity(sine_model(), IndexSubset::singleton(1), 256, 1e-10));
    }
    if (all || scope == "anova") {
        for (const ModelSpec& model : {builtin("cdf_product"), additive_two_input_model()}) {
            std::vector<EqualityReport> sub = verify_anova_structure(model, 128, 1e-8);
            reports.insert(reports.end(), sub.begin(), sub.end());
        }
    }
    if (all || scope == "inequalities") {
        std::mt19937_64 rng(20240613ULL);
        for (int k = 0; k < 20; ++k) {
            reports.push_back(verify_variance_identity(trig_poly_model(rng, k),
                                                       IndexSubset::singleton(1), 256, 1e-10));
        }
    }
    return reports;
}

int verify_command(const std::string& scope, std::ostream& out, const std::string& out_path,
                   ReportFormat format) {
    const std::vector<EqualityReport> reports = verify_suite(scope);
    bool ok = true;
    for (const EqualityReport& r : reports) {
        char line[256];
        std::snprintf(line, sizeof(line), "%-60s residual=%10.3e tol=%8.1e %s", r.statement.c_str(),
                      r.residual, r.tolerance, r.pass() ? "PASS" : "FAIL");
        out << line << '\n';
        ok = ok && r.pass();
    }
    out << (ok ? "verify: all checks passed" : "verify: FAILURES present") << '\n';

    if (!out_path.empty()) {
        std::ofstream file(out_path);
        if (!file) throw std::runtime_error("cannot open output file: " + out_path);
        if (format == ReportFormat::Csv) {
            file << "statement,lhs,rhs,residual,tolerance,pass\n";
            for (const EqualityReport& r : reports) {
                char buf[512];
                std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%d\n",
                              r.statement.c_str(), r.lhs, r.rhs, r.residual, r.tolerance,
                              r.pass() ? 1 : 0);
                file << buf;
            }
        } else {
            json j = json::array();
            for (const EqualityReport& r : reports) {
                j.push_back({{"statement", r.statement},
                             {"lhs", r.lhs},
                             {"rhs", r.rhs},
                             {"residual", r.residual},
                             {"tolerance", r.tolerance},
                             {"pass", r.pass()}});
            }
            file << j.dump(2) << '\n';
        }
    }
    return ok ? 0 : 1;
}

}  // namespace proxy_sa
