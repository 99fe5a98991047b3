// Command-line front end: run studies, add comparison columns, run the
// verification suites.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>

#include "proxy_sa/report.hpp"

namespace {

void apply_overrides(proxy_sa::StudyConfig& config, const std::string& sampler, int m, long long seed,
                     long long skip, int replicates, const std::string& derivatives, double fd_step,
                     int order, const std::string& subsets) {
    using proxy_sa::DerivativeMode;
    using proxy_sa::Generator;
    if (!sampler.empty()) {
        config.options.sampler = sampler == "sobol" ? Generator::Sobol : Generator::Prng;
    }
    if (m > 0) config.options.m = m;
    if (seed >= 0) config.options.seed = static_cast<std::uint64_t>(seed);
    if (skip >= 0) config.options.skip = static_cast<std::uint64_t>(skip);
    if (replicates > 0) config.options.replicates = replicates;
    if (!derivatives.empty()) {
        config.options.derivatives = derivatives == "analytic" ? DerivativeMode::Analytic
                                     : derivatives == "fd"     ? DerivativeMode::FiniteDifference
                                                               : DerivativeMode::Auto;
    }
    if (fd_step > 0) config.options.scheme.rel_step = fd_step;
    if (order > 0) config.options.order = order;
    if (!subsets.empty()) {
        std::vector<proxy_sa::IndexSubset> list;
        std::istringstream is(subsets);
        std::string token;
        while (std::getline(is, token, ';')) {
            if (!token.empty()) list.push_back(proxy_sa::IndexSubset::parse(token));
        }
        config.options.subsets = std::move(list);
    }
}

int run_or_compare(const std::string& config_path, const std::string& out,
                   const std::string& format, bool with_bounds, const std::string& sampler, int m,
                   long long seed, long long skip, int replicates, const std::string& derivatives,
                   double fd_step, int order, const std::string& subsets) {
    proxy_sa::StudyConfig config = proxy_sa::load_study_config(config_path);
    apply_overrides(config, sampler, m, seed, skip, replicates, derivatives, fd_step, order,
                    subsets);
    if (!out.empty()) config.out_path = out;
    if (!format.empty()) {
        config.format = format == "json" ? proxy_sa::ReportFormat::Json : proxy_sa::ReportFormat::Csv;
    }

    const proxy_sa::ReportTable table = proxy_sa::run_study(config, with_bounds);
    if (config.out_path.empty()) {
        std::cout << proxy_sa::render_csv(table);
    } else {
        proxy_sa::write_report(table, config.out_path, config.format);
        std::cout << "wrote " << table.rows.size() << " rows to " << config.out_path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Derivative-based proxy-measures for global sensitivity analysis"};
    app.require_subcommand(1);

    std::string config_path, out, format, sampler, derivatives, subsets, scope = "all";
    int m = 0, replicates = 0, order = 0;
    long long seed = -1, skip = -1;
    double fd_step = 0.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "study configuration file (JSON)")->required();
        cmd->add_option("--out", out, "output path (stdout when omitted)");
        cmd->add_option("--format", format, "csv|json");
        cmd->add_option("--sampler", sampler, "sobol|prng");
        cmd->add_option("--m", m, "sample size per replicate");
        cmd->add_option("--seed", seed, "base seed for prng sampling");
        cmd->add_option("--skip", skip, "points discarded from the Sobol sequence");
        cmd->add_option("--replicates", replicates, "replicate count R");
        cmd->add_option("--derivatives", derivatives, "analytic|fd|auto");
        cmd->add_option("--fd-step", fd_step, "relative finite-difference step");
        cmd->add_option("--order", order, "1 = singletons, 2 = singletons + pairs");
        cmd->add_option("--subsets", subsets, "explicit subset list, e.g. \"1,3;2,3\"");
    };

    CLI::App* run = app.add_subcommand("run", "estimate proxy-measures for a study");
    add_common(run);
    CLI::App* compare =
        app.add_subcommand("compare", "run plus classical Poincare bounds and references");
    add_common(compare);

    CLI::App* verify = app.add_subcommand("verify", "quadrature identity/ANOVA/inequality checks");
    verify->add_option("--scope", scope, "equalities|anova|inequalities|all");
    verify->add_option("--out", out, "write the check table to this path");
    verify->add_option("--format", format, "csv|json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return run_or_compare(config_path, out, format, false, sampler, m, seed, skip,
                                  replicates, derivatives, fd_step, order, subsets);
        }
        if (compare->parsed()) {
            return run_or_compare(config_path, out, format, true, sampler, m, seed, skip,
                                  replicates, derivatives, fd_step, order, subsets);
        }
        if (verify->parsed()) {
            const proxy_sa::ReportFormat fmt =
                format == "json" ? proxy_sa::ReportFormat::Json : proxy_sa::ReportFormat::Csv;
            return proxy_sa::verify_command(scope, std::cout, out, fmt);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
