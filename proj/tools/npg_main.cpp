#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "npg/harness.hpp"

namespace {

// Exit codes: 0 success, 2 usage/config error, 3 data error, 4 numerical failure.
int classify(const std::exception& e) {
    if (dynamic_cast<const npg::ConfigError*>(&e)) return 2;
    if (dynamic_cast<const npg::DataError*>(&e)) return 3;
    if (dynamic_cast<const npg::ConstantColumnError*>(&e)) return 3;
    if (dynamic_cast<const npg::InvalidInput*>(&e)) return 3;
    return 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"npg — rank-based estimation of nonparanormal graphical models"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    // --- simulate ---
    auto* sim = app.add_subcommand("simulate", "run a simulation experiment from a JSON config");
    std::string sim_config, sim_out = "npg_out";
    sim->add_option("--config", sim_config, "JSON config file")->required();
    sim->add_option("--out", sim_out, "output directory");

    // --- fit ---
    auto* fit = app.add_subcommand("fit", "fit one estimator to CSV data");
    std::string fit_data, fit_estimator, fit_out;
    npg::FitCsvOptions fit_opts;
    double fit_lambda = -1.0, fit_pilot = -1.0;
    fit->add_option("--data", fit_data, "input CSV (header row + numeric body)")->required();
    fit->add_option("--estimator", fit_estimator, "estimator name, e.g. R-GLASSO")->required();
    fit->add_option("--lambda", fit_lambda, "fixed regularization parameter");
    fit->add_flag("--cv", fit_opts.cv, "choose lambda by cross-validation");
    fit->add_option("--lambda-pilot", fit_pilot, "pilot lambda for R-NADS / R-ACLIME");
    fit->add_option("--folds", fit_opts.folds, "CV folds (default 5)");
    fit->add_option("--grid-size", fit_opts.grid_size, "lambda grid size (default 30)");
    fit->add_option("--grid-ratio", fit_opts.grid_ratio, "grid lower end ratio (default 0.05)");
    fit->add_option("--seed", fit_opts.seed, "seed for CV fold splits");
    fit->add_flag("--log-transform", fit_opts.log_transform,
                  "log-transform the data first (naive estimators on skewed data)");
    fit->add_option("--out", fit_out, "output prefix")->required();

    // --- bootstrap ---
    auto* boot = app.add_subcommand("bootstrap", "bootstrap edge-stability selection");
    std::string boot_data, boot_estimator, boot_out;
    npg::BootstrapOptions boot_opts;
    boot->add_option("--data", boot_data, "input CSV")->required();
    boot->add_option("--estimator", boot_estimator, "estimator name")->required();
    boot->add_option("--B", boot_opts.B, "number of bootstrap resamples (default 100)");
    boot->add_option("--keep", boot_opts.keep_threshold,
                     "keep edges selected at least this many times (default 80)");
    boot->add_option("--seed", boot_opts.seed, "seed");
    boot->add_option("--folds", boot_opts.folds, "CV folds per resample");
    boot->add_option("--grid-size", boot_opts.grid_size, "lambda grid size");
    boot->add_option("--grid-ratio", boot_opts.grid_ratio, "grid lower end ratio");
    boot->add_flag("--log-transform", boot_opts.log_transform, "log-transform the data first");
    boot->add_option("--out", boot_out, "output prefix (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) {
            const npg::SimulationConfig config = npg::load_simulation_config(sim_config);
            const npg::SimulationResult result = npg::run_simulation(config, sim_out);
            std::cout << "wrote " << result.per_rep_path << "\n"
                      << "wrote " << result.aggregate_path << "\n";
            if (result.failures > 0)
                std::cerr << "npg: " << result.failures << " replication(s) failed\n";
            return 0;
        }
        if (fit->parsed()) {
            fit_opts.estimator = fit_estimator;
            fit_opts.out_prefix = fit_out;
            if (fit_lambda >= 0.0) fit_opts.lambda = fit_lambda;
            if (fit_pilot >= 0.0) fit_opts.lambda_pilot = fit_pilot;
            const npg::FitCsvResult result = npg::fit_csv(fit_data, fit_opts);
            std::cout << "lambda " << result.lambda;
            if (result.lambda_pilot) std::cout << " (pilot " << *result.lambda_pilot << ")";
            std::cout << "\nedges " << result.edge_count << "\nwrote " << result.theta_path
                      << "\nwrote " << result.edges_path << "\n";
            return 0;
        }
        if (boot->parsed()) {
            boot_opts.estimator = boot_estimator;
            boot_opts.out_prefix = boot_out;
            const npg::BootstrapResult result =
                npg::bootstrap_stability_csv(boot_data, boot_opts);
            if (boot_out.empty()) {
                std::cout << "i,j,count\n";
                for (const auto& [edge, count] : result.kept)
                    std::cout << (edge.first + 1) << "," << (edge.second + 1) << "," << count
                              << "\n";
            } else {
                std::cout << "kept " << result.kept.size() << " edge(s)\nwrote "
                          << result.out_path << "\n";
            }
            if (result.failures > 0)
                std::cerr << "npg: " << result.failures << " resample(s) failed\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "npg: error: " << e.what() << "\n";
        return classify(e);
    }
    return 0;
}
