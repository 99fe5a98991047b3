#pragma once

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

#include "proxy_sa/estimators.hpp"
#include "proxy_sa/oracle.hpp"

namespace proxy_sa {

enum class ReportFormat { Csv, Json };

// One study: model selection plus sampler/derivative/subset settings and
// output preferences.
struct StudyConfig {
    std::string model = "ishigami";
    // Model parameter overrides; see the builtin factories for the accepted
    // keys ("A" for gsobol_mv; "a", "b", "marginals" for cdf_product).
    std::string params_json = "{}";
    StudyOptions options;
    std::string out_path;
    ReportFormat format = ReportFormat::Csv;
};

StudyConfig parse_study_config(const nlohmann::json& j);
StudyConfig load_study_config(const std::string& path);

ModelSpec model_from_config(const StudyConfig& config);

struct ReportRow {
    IndexSubset subset;
    std::string kind;  // "total" or "total_interaction"
    std::optional<double> true_index;
    std::optional<double> classical_bound;
    double proxy_mean = 0.0;
    double proxy_std = 0.0;
    std::string estimator;  // "first" or "second"
    int m = 0;
    int replicates = 0;
    std::string deriv_source;  // "analytic" or "fd"
};

struct ReportTable {
    std::vector<ReportRow> rows;  // sorted: singletons first, then pairs
    std::string config_echo;      // JSON text of the study configuration
    std::string version;
    double wall_time_seconds = 0.0;
};

// End-to-end pipeline: sample -> derivatives -> weighted outer products ->
// normalized proxies -> replicate aggregation. Closed-form references are
// attached when the model has them; with_bounds additionally computes the
// classical Poincare bound column from the same sample budget.
ReportTable run_study(const StudyConfig& config, bool with_bounds);

// CSV columns:
// subset,kind,true_index,classical_bound,proxy_mean,proxy_std,estimator,m,R,deriv_source
void write_report(const ReportTable& table, const std::string& path, ReportFormat format);

std::string render_csv(const ReportTable& table);
nlohmann::json to_json(const ReportTable& table);
ReportTable read_report_json(const std::string& path);

// Equality/orthogonality/inequality suites. Scope: "equalities", "anova",
// "inequalities" or "all". Returns the reports and writes one line per check
// to `out`; process exit status is 0 iff every report passes.
std::vector<EqualityReport> verify_suite(const std::string& scope);
int verify_command(const std::string& scope, std::ostream& out,
                   const std::string& out_path = "", ReportFormat format = ReportFormat::Csv);

}  // namespace proxy_sa
