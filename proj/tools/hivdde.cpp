#include <CLI11.hpp>

#include "hivdde/cli.hpp"

namespace {

void add_common_flags(CLI::App* sub, hivdde::cli::RunConfig& cfg, std::string& tspan,
                      std::string& format, std::string& out) {
    sub->add_option("--params", [&cfg](const std::vector<std::string>& v) {
        cfg.params_path = v.front();
        return true;
    }, "parameter file (name = value lines)");
    sub->add_option("--data", [&cfg](const std::vector<std::string>& v) {
        cfg.data = v.front();
        return true;
    }, "dataset file, or 'builtin' for the Uganda observations");
    sub->add_option("--delay", [&cfg](const std::vector<std::string>& v) {
        cfg.delay = std::stod(v.front());
        return true;
    }, "delay in years; 0/3/6/9/12 also select the matching fitted row");
    sub->add_option("--tspan", tspan, "time span t0:t1:dt");
    sub->add_option("--out", out, "output directory (default $HIVDDE_OUT or .)");
    sub->add_option("--format", format, "output format: csv or json-lines")
        ->check(CLI::IsMember({"csv", "json-lines"}));
    sub->add_option("--rtol", [&cfg](const std::vector<std::string>& v) {
        cfg.rel_tol = std::stod(v.front());
        return true;
    }, "relative integration tolerance");
    sub->add_option("--atol", [&cfg](const std::vector<std::string>& v) {
        cfg.abs_tol = std::stod(v.front());
        return true;
    }, "absolute integration tolerance");
    sub->add_option("--jobs", cfg.jobs, "worker count for sweeps (default: cores)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Delayed HIV/AIDS epidemic model with education campaigns: "
                 "simulation, equilibrium analysis, and data fitting"};
    app.require_subcommand(1);

    hivdde::cli::RunConfig cfg;
    std::string tspan, format = "csv", out, tau_grid, beta0_scan;

    auto* simulate = app.add_subcommand("simulate", "integrate the full model and export samples");
    auto* fit = app.add_subcommand("fit", "fit the free rates to a dataset");
    auto* analyze = app.add_subcommand("analyze", "equilibria, stability, and persistence report");
    auto* sweep = app.add_subcommand("sweep", "dissemination-rate sweep / beta0 stability scan");
    auto* si = app.add_subcommand("si", "integrate the information-free SI model");

    for (auto* sub : {simulate, fit, analyze, sweep, si})
        add_common_flags(sub, cfg, tspan, format, out);
    sweep->add_option("--tau-grid", tau_grid, "dissemination grid lo:hi:n[,log|lin]");
    sweep->add_option("--beta0-scan", beta0_scan, "beta0 stability scan grid lo:hi:n");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : hivdde::cli::kExitConfig;
    }

    try {
        if (!tspan.empty()) cfg.tspan = hivdde::cli::parse_tspan(tspan);
        if (!out.empty()) cfg.out_dir = out;
        cfg.format = format == "csv" ? hivdde::TableFormat::Csv : hivdde::TableFormat::JsonLines;
        if (!tau_grid.empty()) cfg.tau_grid = hivdde::cli::parse_grid(tau_grid);
        if (!beta0_scan.empty()) cfg.beta0_scan = hivdde::cli::parse_grid(beta0_scan);

        if (simulate->parsed()) return hivdde::cli::cmd_simulate(cfg);
        if (fit->parsed()) return hivdde::cli::cmd_fit(cfg);
        if (analyze->parsed()) return hivdde::cli::cmd_analyze(cfg);
        if (sweep->parsed()) return hivdde::cli::cmd_sweep(cfg);
        if (si->parsed()) return hivdde::cli::cmd_si(cfg);
    } catch (const hivdde::cli::CliError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return hivdde::cli::kExitConfig;
}
