#include "npg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "npg/csv.hpp"
#include "npg/evaluate.hpp"
#include "npg/parallel.hpp"
#include "npg/rng.hpp"

namespace npg {

using nlohmann::json;

uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
    uint64_t h = seed;
    for (uint64_t v : {a, b, c}) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdULL;
        h ^= h >> 33;
    }
    return h;
}

namespace {

std::pair<Topology, bool> parse_model_name(const std::string& name) {
    std::string stem = name;
    bool npn = false;
    if (!stem.empty() && stem.back() == 'b') {
        npn = true;
        stem.pop_back();
    }
    if (stem == "Chain05" || stem == "Model1") return {Topology::Chain05, npn};
    if (stem == "Banded4" || stem == "Model2") return {Topology::Banded4, npn};
    if (stem == "Hub" || stem == "Model3") return {Topology::Hub, npn};
    if (stem == "RandomErdos" || stem == "Model4") return {Topology::RandomErdos, npn};
    throw ConfigError("models: unknown model name '" + name + "'");
}

template <typename T>
T get_field(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("field '" + key + "' has the wrong type");
    }
}

}  // namespace

SimulationConfig parse_simulation_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    SimulationConfig cfg;
    cfg.n = get_field<int>(j, "n", cfg.n);
    cfg.p = get_field<int>(j, "p", cfg.p);
    cfg.reps = get_field<int>(j, "reps", cfg.reps);
    cfg.seed = get_field<uint64_t>(j, "seed", cfg.seed);
    cfg.folds = get_field<int>(j, "folds", cfg.folds);
    cfg.grid_size = get_field<int>(j, "grid_size", cfg.grid_size);
    cfg.grid_ratio = get_field<double>(j, "grid_ratio", cfg.grid_ratio);
    cfg.hub_count = get_field<int>(j, "hub_count", cfg.hub_count);
    cfg.hub_degree = get_field<int>(j, "hub_degree", cfg.hub_degree);
    cfg.erdos_prob = get_field<double>(j, "erdos_prob", cfg.erdos_prob);
    cfg.erdos_value = get_field<double>(j, "erdos_value", cfg.erdos_value);

    if (cfg.n < 10) throw ConfigError("field 'n' must be >= 10");
    if (cfg.p < 4) throw ConfigError("field 'p' must be >= 4");
    if (cfg.reps < 1) throw ConfigError("field 'reps' must be >= 1");
    if (cfg.folds < 2) throw ConfigError("field 'folds' must be >= 2");
    if (cfg.grid_size < 2) throw ConfigError("field 'grid_size' must be >= 2");
    if (!(cfg.grid_ratio > 0.0 && cfg.grid_ratio < 1.0))
        throw ConfigError("field 'grid_ratio' must be in (0, 1)");

    std::vector<std::string> model_names;
    if (j.contains("models"))
        model_names = get_field<std::vector<std::string>>(j, "models", {});
    else if (j.contains("model"))
        model_names.push_back(get_field<std::string>(j, "model", ""));
    if (model_names.empty()) throw ConfigError("field 'models' must list at least one model");
    for (const std::string& name : model_names) {
        auto [topology, npn] = parse_model_name(name);
        cfg.models.push_back({name, topology, npn});
    }

    const auto estimator_names = get_field<std::vector<std::string>>(j, "estimators", {});
    if (estimator_names.empty())
        throw ConfigError("field 'estimators' must list at least one estimator");
    for (const std::string& name : estimator_names) {
        try {
            cfg.estimators.push_back(parse_estimator(name));
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("field 'estimators': ") + e.what());
        }
    }

    const std::string canonical = j.dump();
    cfg.config_hash = fnv1a64(canonical.data(), canonical.size());
    return cfg;
}

SimulationConfig load_simulation_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_simulation_config(ss.str());
}

namespace {

std::string repro_header(uint64_t config_hash, uint64_t seed) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "npg %s | config-hash=%016llx | seed=%llu",
                  kArtifactVersion, static_cast<unsigned long long>(config_hash),
                  static_cast<unsigned long long>(seed));
    return buf;
}

double roundtrip6(double v) {
    // Aggregates are computed on the values as printed, so mean/SE are exactly
    // recomputable from the per-replication CSV.
    return std::stod(format_number(v));
}

struct RepRow {
    bool ok = false;
    std::string error;
    double lambda = 0.0;
    double lambda_pilot = std::numeric_limits<double>::quiet_NaN();
    EvalReport report;
};

const char* kMetricNames[] = {"err_op2", "err_op1", "err_fro", "err_max", "fp", "fn"};

double metric_value(const EvalReport& r, int metric) {
    switch (metric) {
        case 0: return r.err_op2;
        case 1: return r.err_op1;
        case 2: return r.err_fro;
        case 3: return r.err_max;
        case 4: return r.fp;
        case 5: return r.fn;
    }
    return 0.0;
}

}  // namespace

SimulationResult run_simulation(const SimulationConfig& config, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    const int n_models = static_cast<int>(config.models.size());
    const int n_est = static_cast<int>(config.estimators.size());
    const int reps = config.reps;

    // rows[model][rep][estimator]
    std::vector<RepRow> rows(static_cast<size_t>(n_models) * reps * n_est);
    auto row_at = [&](int m, int r, int e) -> RepRow& {
        return rows[(static_cast<size_t>(m) * reps + r) * n_est + e];
    };

    parallel_for(static_cast<int64_t>(n_models) * reps, [&](int64_t task) {
        const int m = static_cast<int>(task / reps);
        const int rep = static_cast<int>(task % reps);
        const SimulationConfig::ModelEntry& model = config.models[m];

        ModelSpec spec;
        spec.topology = model.topology;
        spec.p = config.p;
        spec.n = config.n;
        spec.nonparanormal = model.nonparanormal;
        spec.seed = mix_seed(config.seed, 0x7472757468ULL, m, rep);  // topology stream
        spec.hub_count = config.hub_count;
        spec.hub_degree = config.hub_degree;
        spec.erdos_prob = config.erdos_prob;
        spec.erdos_value = config.erdos_value;

        GroundTruth truth;
        DataMatrix latent, observed;
        try {
            truth = build_truth(spec);
            latent = sample_gaussian(truth, config.n,
                                     mix_seed(config.seed, 0x73616d70ULL, m, rep));
            observed = model.nonparanormal ? apply_nonparanormal(latent) : latent;
        } catch (const std::exception& e) {
            for (int est = 0; est < n_est; ++est) row_at(m, rep, est).error = e.what();
            return;
        }

        for (int est = 0; est < n_est; ++est) {
            const EstimatorModel& estimator = config.estimators[est];
            RepRow& row = row_at(m, rep, est);
            try {
                // MB is a Gaussian baseline: it sees the latent (pre-transform)
                // data; everything else sees what an analyst would observe.
                const DataMatrix& input =
                    (estimator.kind == EstimatorKind::Mb) ? latent : observed;
                TuneOptions opts;
                opts.folds = config.folds;
                opts.grid_size = config.grid_size;
                opts.grid_ratio = config.grid_ratio;
                opts.seed = mix_seed(config.seed, 0x63766664ULL, m * 1000 + est, rep);
                const TunedFit tuned = fit_with_cv(input, estimator, opts);
                row.lambda = tuned.fit.lambda;
                if (tuned.fit.lambda_pilot) row.lambda_pilot = *tuned.fit.lambda_pilot;
                row.report =
                    evaluate_estimate(tuned.fit.estimate.theta, tuned.fit.selection, truth);
                row.ok = true;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    });

    const std::string header = repro_header(config.config_hash, config.seed);
    SimulationResult result;
    result.per_rep_path = (fs::path(out_dir) / "results_per_rep.csv").string();
    result.aggregate_path = (fs::path(out_dir) / "results_aggregate.csv").string();

    std::ofstream per_rep(result.per_rep_path);
    if (!per_rep) throw DataError("cannot write '" + result.per_rep_path + "'");
    per_rep << "# " << header << "\n";
    per_rep << "model,estimator,rep,lambda,lambda_pilot,err_op2,err_op1,err_fro,err_max,"
               "fp,fn,sign_consistent\n";
    for (int m = 0; m < n_models; ++m) {
        for (int rep = 0; rep < reps; ++rep) {
            for (int e = 0; e < n_est; ++e) {
                const RepRow& row = row_at(m, rep, e);
                if (!row.ok) {
                    std::cerr << "npg: replication failed (model "
                              << config.models[m].name << ", estimator "
                              << config.estimators[e].name << ", rep " << rep
                              << "): " << row.error << "\n";
                    ++result.failures;
                    continue;
                }
                per_rep << config.models[m].name << "," << config.estimators[e].name << ","
                        << rep << "," << format_number(row.lambda) << ",";
                if (std::isnan(row.lambda_pilot))
                    per_rep << "";
                else
                    per_rep << format_number(row.lambda_pilot);
                for (int metric = 0; metric < 6; ++metric)
                    per_rep << "," << format_number(metric_value(row.report, metric));
                per_rep << "," << (row.report.sign_consistent ? 1 : 0) << "\n";
            }
        }
    }
    per_rep.close();

    std::ofstream agg(result.aggregate_path);
    if (!agg) throw DataError("cannot write '" + result.aggregate_path + "'");
    agg << "# " << header << "\n";
    agg << "model,estimator,metric,mean,se,reps\n";
    char buf[64];
    for (int m = 0; m < n_models; ++m) {
        for (int e = 0; e < n_est; ++e) {
            for (int metric = 0; metric < 6; ++metric) {
                std::vector<double> values;
                for (int rep = 0; rep < reps; ++rep) {
                    const RepRow& row = row_at(m, rep, e);
                    if (row.ok) values.push_back(roundtrip6(metric_value(row.report, metric)));
                }
                const auto [mean, se] = mean_and_se(values);
                agg << config.models[m].name << "," << config.estimators[e].name << ","
                    << kMetricNames[metric] << ",";
                std::snprintf(buf, sizeof buf, "%.12g,%.12g", mean, se);
                agg << buf << "," << values.size() << "\n";
            }
        }
    }
    return result;
}

namespace {

DataMatrix load_fit_input(const std::string& data_path, bool log_transform) {
    DataMatrix data = load_csv(data_path);
    if (data.n < 10) throw DataError("need at least 10 data rows, got " + std::to_string(data.n));
    if (log_transform) {
        for (int i = 0; i < data.n; ++i) {
            for (int j = 0; j < data.p; ++j) {
                if (!(data(i, j) > 0.0))
                    throw DataError("--log-transform requires positive values (row " +
                                    std::to_string(i + 1) + ", column " + std::to_string(j + 1) +
                                    ")");
                data(i, j) = std::log(data(i, j));
            }
        }
    }
    return data;
}

std::vector<EdgeRecord> edges_sorted_by_weight(const GraphSelection& sel,
                                               const SymMatrix& theta) {
    std::vector<EdgeRecord> edges;
    for (const auto& [i, j] : sel.edges) edges.push_back({i, j, theta(i, j)});
    std::stable_sort(edges.begin(), edges.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
        return std::abs(a.weight) > std::abs(b.weight);
    });
    return edges;
}

uint64_t options_hash(const std::string& s) { return fnv1a64(s.data(), s.size()); }

}  // namespace

FitCsvResult fit_csv(const std::string& data_path, const FitCsvOptions& options) {
    const EstimatorModel est = parse_estimator(options.estimator);
    const bool adaptive =
        est.kind == EstimatorKind::Nads || est.kind == EstimatorKind::Aclime;
    if (options.cv == options.lambda.has_value())
        throw ConfigError("exactly one of --lambda and --cv is required");
    if (!options.cv && adaptive && !options.lambda_pilot)
        throw ConfigError("estimator " + options.estimator +
                          " needs --lambda-pilot together with --lambda");
    if (options.out_prefix.empty()) throw ConfigError("--out prefix is required");

    const DataMatrix data = load_fit_input(data_path, options.log_transform);

    FitResult fit;
    if (options.cv) {
        TuneOptions tune;
        tune.folds = options.folds;
        tune.grid_size = options.grid_size;
        tune.grid_ratio = options.grid_ratio;
        tune.seed = options.seed;
        fit = fit_with_cv(data, est, tune).fit;
    } else {
        fit = fit_estimator(est, data, *options.lambda, options.lambda_pilot);
    }

    std::ostringstream opt_str;
    opt_str << "fit " << options.estimator << " lambda=" << fit.lambda << " cv=" << options.cv
            << " log=" << options.log_transform << " seed=" << options.seed;
    const std::string header = repro_header(options_hash(opt_str.str()), options.seed);

    FitCsvResult result;
    result.lambda = fit.lambda;
    result.lambda_pilot = fit.lambda_pilot;
    result.theta_path = options.out_prefix + "_theta.csv";
    result.edges_path = options.out_prefix + "_edges.csv";
    write_matrix_csv(result.theta_path, fit.estimate.theta, data.column_names, header);
    const auto edges = edges_sorted_by_weight(fit.selection, fit.estimate.theta);
    write_edges_csv(result.edges_path, edges, header, "theta_ij");
    result.edge_count = static_cast<int>(edges.size());
    return result;
}

BootstrapResult bootstrap_stability(const DataMatrix& data, const BootstrapOptions& options) {
    if (options.B < 10) throw ConfigError("--B must be >= 10");
    if (options.keep_threshold < 1 || options.keep_threshold > options.B)
        throw ConfigError("--keep must be in [1, B]");
    const EstimatorModel est = parse_estimator(options.estimator);
    data.validate();

    const int B = options.B;
    std::vector<GraphSelection> selections(B);
    std::vector<uint8_t> ok(B, 0);
    std::vector<std::string> errors(B);
    parallel_for(B, [&](int64_t b) {
        try {
            Rng rng = Rng::substream(options.seed, 0x626f6f74ULL + static_cast<uint64_t>(b));
            DataMatrix resample(data.n, data.p);
            resample.column_names = data.column_names;
            for (int i = 0; i < data.n; ++i) {
                const int src = static_cast<int>(rng.next_below(data.n));
                for (int j = 0; j < data.p; ++j) resample(i, j) = data(src, j);
            }
            TuneOptions tune;
            tune.folds = options.folds;
            tune.grid_size = options.grid_size;
            tune.grid_ratio = options.grid_ratio;
            tune.seed = mix_seed(options.seed, 0x62637620ULL, static_cast<uint64_t>(b), 0);
            const TunedFit tuned = fit_with_cv(resample, est, tune);
            selections[b] = tuned.fit.selection;
            ok[b] = 1;
        } catch (const std::exception& e) {
            errors[b] = e.what();
        }
    });

    BootstrapResult result;
    for (int b = 0; b < B; ++b) {
        if (!ok[b]) {
            std::cerr << "npg: bootstrap resample " << b << " failed: " << errors[b] << "\n";
            ++result.failures;
            continue;
        }
        for (const auto& e : selections[b].edges) ++result.counts[e];
    }
    for (const auto& [edge, count] : result.counts)
        if (count >= options.keep_threshold) result.kept.push_back({edge, count});
    std::stable_sort(result.kept.begin(), result.kept.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });

    if (!options.out_prefix.empty()) {
        std::ostringstream opt_str;
        opt_str << "bootstrap " << options.estimator << " B=" << options.B
                << " keep=" << options.keep_threshold << " seed=" << options.seed;
        const std::string header = repro_header(options_hash(opt_str.str()), options.seed);
        std::vector<EdgeRecord> rows;
        for (const auto& [edge, count] : result.kept)
            rows.push_back({edge.first, edge.second, static_cast<double>(count)});
        result.out_path = options.out_prefix + "_stable_edges.csv";
        write_edges_csv(result.out_path, rows, header, "count");
    }
    return result;
}

BootstrapResult bootstrap_stability_csv(const std::string& data_path,
                                        const BootstrapOptions& options) {
    if (options.B < 10) throw ConfigError("--B must be >= 10");
    if (options.keep_threshold < 1 || options.keep_threshold > options.B)
        throw ConfigError("--keep must be in [1, B]");
    const DataMatrix data = load_fit_input(data_path, options.log_transform);
    return bootstrap_stability(data, options);
}

}  // namespace npg
