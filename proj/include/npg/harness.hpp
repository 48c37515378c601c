#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "npg/estimators.hpp"
#include "npg/simulate.hpp"

namespace npg {

inline constexpr const char* kArtifactVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Simulation experiments
// ---------------------------------------------------------------------------

struct SimulationConfig {
    struct ModelEntry {
        std::string name;  // e.g. "Chain05", "Banded4b", "Model1b"
        Topology topology = Topology::Chain05;
        bool nonparanormal = false;
    };
    std::vector<ModelEntry> models;
    std::vector<EstimatorModel> estimators;
    int n = 300;
    int p = 100;
    int reps = 20;
    uint64_t seed = 1;
    int folds = 5;
    int grid_size = 30;
    double grid_ratio = 0.05;
    int hub_count = 16;
    int hub_degree = 5;
    double erdos_prob = 0.01;
    double erdos_value = 0.2;
    uint64_t config_hash = 0;  // filled by the parser
};

// Parses and validates the JSON config document; ConfigError names the
// offending field.
SimulationConfig parse_simulation_config(const std::string& json_text);
SimulationConfig load_simulation_config(const std::string& path);

struct SimulationResult {
    std::string per_rep_path;
    std::string aggregate_path;
    int failures = 0;
};

// Runs (model x estimator x replication), cross-validating every fit, and
// writes results_per_rep.csv plus results_aggregate.csv (columns model,
// estimator, metric, mean, se, reps) under out_dir. Replications run in
// parallel with per-replication seed substreams; outputs are byte-identical
// across reruns. Failed replications are logged to stderr and excluded.
SimulationResult run_simulation(const SimulationConfig& config, const std::string& out_dir);

// ---------------------------------------------------------------------------
// CSV fitting / bootstrap stability
// ---------------------------------------------------------------------------

struct FitCsvOptions {
    std::string estimator;
    std::optional<double> lambda;
    bool cv = false;
    std::optional<double> lambda_pilot;
    int folds = 5;
    int grid_size = 30;
    double grid_ratio = 0.05;
    uint64_t seed = 0;
    bool log_transform = false;  // off by default; rank estimators never need it
    std::string out_prefix;
};

struct FitCsvResult {
    std::string theta_path;
    std::string edges_path;
    double lambda = 0.0;
    std::optional<double> lambda_pilot;
    int edge_count = 0;
};

FitCsvResult fit_csv(const std::string& data_path, const FitCsvOptions& options);

struct BootstrapOptions {
    std::string estimator;
    int B = 100;
    int keep_threshold = 80;
    uint64_t seed = 0;
    int folds = 5;
    int grid_size = 30;
    double grid_ratio = 0.05;
    bool log_transform = false;
    std::string out_prefix;  // when empty, the edge list goes to stdout
};

struct BootstrapResult {
    // Selection counts over the B resamples for every edge ever selected.
    std::map<std::pair<int, int>, int> counts;
    // Edges kept (count >= keep_threshold), sorted by count descending.
    std::vector<std::pair<std::pair<int, int>, int>> kept;
    int failures = 0;
    std::string out_path;
};

BootstrapResult bootstrap_stability(const DataMatrix& data, const BootstrapOptions& options);
BootstrapResult bootstrap_stability_csv(const std::string& data_path,
                                        const BootstrapOptions& options);

// Seed substream derivation shared by the harness pieces.
uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b, uint64_t c);

}  // namespace npg
