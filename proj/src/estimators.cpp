#include "npg/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "npg/evaluate.hpp"
#include "npg/linalg.hpp"
#include "npg/parallel.hpp"

namespace npg {

namespace {

bool is_neighborhood_family(EstimatorKind k) {
    return k == EstimatorKind::Nds || k == EstimatorKind::Nads || k == EstimatorKind::Mb;
}

EstimatorTag tag_for(EstimatorKind k) {
    switch (k) {
        case EstimatorKind::Glasso: return EstimatorTag::Glasso;
        case EstimatorKind::Nds: return EstimatorTag::Nds;
        case EstimatorKind::Nads: return EstimatorTag::Nads;
        case EstimatorKind::Clime: return EstimatorTag::Clime;
        case EstimatorKind::Aclime: return EstimatorTag::Aclime;
        case EstimatorKind::Mb: return EstimatorTag::Mb;
    }
    return EstimatorTag::Glasso;
}

std::vector<std::vector<double>> nads_weights(const std::vector<NeighborhoodFit>& pilots,
                                              int n) {
    std::vector<std::vector<double>> w(pilots.size());
    const double ridge = 1.0 / static_cast<double>(n);
    for (size_t k = 0; k < pilots.size(); ++k) {
        w[k].resize(pilots[k].beta.size());
        for (size_t j = 0; j < w[k].size(); ++j)
            w[k][j] = 1.0 / (std::abs(pilots[k].beta[j]) + ridge);
    }
    return w;
}

// Smallest lambda at which every weighted node problem accepts beta = 0,
// i.e. |b_j| <= lambda * w_j entrywise for all nodes.
double weighted_lambda_max_nads(const SymMatrix& stat,
                                const std::vector<std::vector<double>>& weights) {
    const int p = stat.dim();
    double lmax = 0.0;
    for (int k = 0; k < p; ++k) {
        for (int j = 0, jj = 0; j < p; ++j) {
            if (j == k) continue;
            lmax = std::max(lmax, std::abs(stat(j, k)) / weights[k][jj]);
            ++jj;
        }
    }
    return lmax;
}

}  // namespace

EstimatorModel parse_estimator(const std::string& name) {
    EstimatorModel m;
    m.name = name;
    std::string base = name;
    if (base.size() > 3 && base.substr(base.size() - 3) == ".au") {
        m.aggregation = Aggregation::Union;
        base = base.substr(0, base.size() - 3);
    } else if (base.size() > 3 && base.substr(base.size() - 3) == ".ai") {
        m.aggregation = Aggregation::Intersection;
        base = base.substr(0, base.size() - 3);
    }
    if (base.rfind("R-", 0) == 0) {
        m.rank_based = true;
        base = base.substr(2);
    }

    if (base == "GLASSO") {
        m.kind = EstimatorKind::Glasso;
    } else if (base == "NDS") {
        m.kind = EstimatorKind::Nds;
    } else if (base == "NADS") {
        m.kind = EstimatorKind::Nads;
    } else if (base == "CLIME") {
        m.kind = EstimatorKind::Clime;
    } else if (base == "ACLIME") {
        m.kind = EstimatorKind::Aclime;
    } else if (base == "MB") {
        if (m.rank_based)
            throw ConfigError(
                "estimator '" + name + "': the rank-based neighborhood lasso is refused — "
                "the adjusted Spearman matrix can be indefinite, which makes the "
                "lasso objective unbounded; use R-NDS or R-NADS instead");
        m.kind = EstimatorKind::Mb;
    } else {
        throw ConfigError("unknown estimator name '" + name + "'");
    }
    if (m.aggregation && !is_neighborhood_family(m.kind))
        throw ConfigError("estimator '" + name + "': .au/.ai applies only to the "
                          "neighborhood family (MB, NDS, NADS)");
    if (!m.rank_based && m.kind == EstimatorKind::Nads)
        throw ConfigError("estimator '" + name + "': the adaptive Dantzig selector is "
                          "provided rank-based only (use R-NADS)");
    if (!m.rank_based && m.kind == EstimatorKind::Aclime)
        throw ConfigError("estimator '" + name + "': the adaptive CLIME is provided "
                          "rank-based only (use R-ACLIME)");
    return m;
}

SymMatrix estimator_statistic(const DataMatrix& data, const EstimatorModel& est) {
    if (est.rank_based) return rank_correlation_matrix(data).r_adjusted;
    return pearson_correlation_matrix(data);
}

FitResult fit_estimator(const EstimatorModel& est, const SymMatrix& stat, int n,
                        double lambda, std::optional<double> lambda_pilot) {
    FitResult out;
    out.lambda = lambda;

    switch (est.kind) {
        case EstimatorKind::Glasso: {
            GlassoSettings s;
            s.lambda = lambda;
            out.estimate = glasso_solve(stat, s);
            out.selection = support_of(out.estimate.theta);
            break;
        }
        case EstimatorKind::Clime: {
            ClimeSettings s;
            s.lambda = lambda;
            s.n = n;
            out.estimate = clime_solve(stat, s);
            out.selection = support_of(out.estimate.theta);
            break;
        }
        case EstimatorKind::Aclime: {
            if (!lambda_pilot) throw PilotRequired("R-ACLIME requires a pilot lambda");
            ClimeSettings s;
            s.lambda = lambda;
            s.adaptive = true;
            s.lambda_pilot = *lambda_pilot;
            s.n = n;
            out.estimate = clime_solve(stat, s);
            out.selection = support_of(out.estimate.theta);
            out.lambda_pilot = lambda_pilot;
            break;
        }
        case EstimatorKind::Nds:
        case EstimatorKind::Nads:
        case EstimatorKind::Mb: {
            std::vector<NeighborhoodFit> fits;
            if (est.kind == EstimatorKind::Nds) {
                fits = nds_fit_all(stat, lambda);
            } else if (est.kind == EstimatorKind::Mb) {
                fits = mb_fit_all(stat, lambda);
            } else {
                if (!lambda_pilot) throw PilotRequired("R-NADS requires a pilot lambda");
                fits = nads_fit_all(stat, *lambda_pilot, lambda, n);
                out.lambda_pilot = lambda_pilot;
            }
            const Matrix raw = reconstruct_precision(fits, stat);
            out.estimate.theta = symmetrize_l1_or_fallback(raw);
            out.estimate.estimator = tag_for(est.kind);
            out.estimate.lambda = lambda;
            out.selection =
                aggregate(fits, est.aggregation.value_or(Aggregation::Union), stat.dim());
            break;
        }
    }
    return out;
}

FitResult fit_estimator(const EstimatorModel& est, const DataMatrix& data, double lambda,
                        std::optional<double> lambda_pilot) {
    return fit_estimator(est, estimator_statistic(data, est), data.n, lambda, lambda_pilot);
}

CvEstimator make_cv_estimator(const EstimatorModel& est) {
    CvEstimator cv;
    cv.statistic = [est](const DataMatrix& train) { return estimator_statistic(train, est); };
    if (est.kind == EstimatorKind::Nads || est.kind == EstimatorKind::Aclime)
        throw ConfigError("make_cv_estimator: adaptive estimators tune in two stages; "
                          "use fit_with_cv");
    cv.fit = [est](const SymMatrix& stat, int n, double lambda, const void*) {
        return fit_estimator(est, stat, n, lambda, std::nullopt).estimate.theta;
    };
    return cv;
}

namespace {

// Stage-2 CV wiring for R-NADS: the pilot fits (at the stage-1 lambda) are
// computed once per fold and shared across the adaptive grid.
struct NadsPrepared {
    std::vector<std::vector<double>> weights;
};

CvEstimator make_nads_stage2(const EstimatorModel& est, double lambda_pilot) {
    CvEstimator cv;
    cv.statistic = [est](const DataMatrix& train) { return estimator_statistic(train, est); };
    cv.prepare = [lambda_pilot](const SymMatrix& stat, int n) {
        auto prep = std::make_shared<NadsPrepared>();
        prep->weights = nads_weights(nds_fit_all(stat, lambda_pilot), n);
        return std::shared_ptr<const void>(prep, prep.get());
    };
    cv.fit = [](const SymMatrix& stat, int, double lambda, const void* prepared) {
        const auto* prep = static_cast<const NadsPrepared*>(prepared);
        const int p = stat.dim();
        std::vector<NeighborhoodFit> fits(p);
        parallel_for(p, [&](int64_t k) {
            fits[k] = nads_fit_with_weights(stat, static_cast<int>(k), prep->weights[k],
                                            lambda);
        });
        return symmetrize_l1_or_fallback(reconstruct_precision(fits, stat));
    };
    return cv;
}

struct AclimePrepared {
    Matrix weights;
};

CvEstimator make_aclime_stage2(const EstimatorModel& est, double lambda_pilot) {
    CvEstimator cv;
    cv.statistic = [est](const DataMatrix& train) { return estimator_statistic(train, est); };
    cv.prepare = [lambda_pilot](const SymMatrix& stat, int n) {
        auto prep = std::make_shared<AclimePrepared>();
        PrecisionEstimate pilot;
        {
            ClimeSettings s;
            s.lambda = lambda_pilot;
            s.n = n;
            pilot = clime_solve(stat, s);
        }
        // Weight construction mirrors clime_solve's adaptive path, but on the
        // per-fold pilot so the grid scan reuses it.
        const int p = stat.dim();
        prep->weights = Matrix(p, p);
        const double ridge = 1.0 / static_cast<double>(n);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j)
                prep->weights(i, j) = 1.0 / (std::abs(pilot.theta(i, j)) + ridge);
        return std::shared_ptr<const void>(prep, prep.get());
    };
    cv.fit = [](const SymMatrix& stat, int, double lambda, const void* prepared) {
        const auto* prep = static_cast<const AclimePrepared*>(prepared);
        const int p = stat.dim();
        Matrix raw(p, p);
        parallel_for(p, [&](int64_t k) {
            std::vector<double> w(p);
            for (int i = 0; i < p; ++i) w[i] = prep->weights(i, static_cast<int>(k));
            const std::vector<double> col =
                clime_column(stat, static_cast<int>(k), lambda, &w);
            for (int i = 0; i < p; ++i) raw(i, static_cast<int>(k)) = col[i];
        });
        return static_cast<SymMatrix>(symmetrize_min_magnitude(raw));
    };
    return cv;
}

}  // namespace

TunedFit fit_with_cv(const DataMatrix& data, const EstimatorModel& est,
                     const TuneOptions& options) {
    const SymMatrix stat = estimator_statistic(data, est);
    const std::vector<double> grid = lambda_grid(stat, options.grid_size, options.grid_ratio);

    TunedFit out;
    if (est.kind != EstimatorKind::Nads && est.kind != EstimatorKind::Aclime) {
        out.cv = cross_validate(data, make_cv_estimator(est), grid, options.folds,
                                options.seed);
        out.fit = fit_estimator(est, stat, data.n, out.cv.lambda, std::nullopt);
        return out;
    }

    // Stage 1: CV of the plain estimator picks the pilot lambda.
    EstimatorModel plain = est;
    plain.kind = (est.kind == EstimatorKind::Nads) ? EstimatorKind::Nds : EstimatorKind::Clime;
    out.cv_pilot = cross_validate(data, make_cv_estimator(plain), grid, options.folds,
                                  options.seed);
    const double lambda_pilot = out.cv_pilot->lambda;

    // Stage 2: adaptive grid scaled by the full-data pilot weights.
    double lambda_max = 0.0;
    if (est.kind == EstimatorKind::Nads) {
        const auto weights = nads_weights(nds_fit_all(stat, lambda_pilot), data.n);
        lambda_max = weighted_lambda_max_nads(stat, weights);
        out.cv = cross_validate(data, make_nads_stage2(est, lambda_pilot),
                                lambda_grid_from_max(lambda_max, options.grid_size,
                                                     options.grid_ratio),
                                options.folds, options.seed);
    } else {
        ClimeSettings s;
        s.lambda = lambda_pilot;
        s.n = data.n;
        const PrecisionEstimate pilot = clime_solve(stat, s);
        for (int k = 0; k < stat.dim(); ++k)
            lambda_max = std::max(lambda_max,
                                  std::abs(pilot.theta(k, k)) + 1.0 / data.n);
        out.cv = cross_validate(data, make_aclime_stage2(est, lambda_pilot),
                                lambda_grid_from_max(lambda_max, options.grid_size,
                                                     options.grid_ratio),
                                options.folds, options.seed);
    }
    out.fit = fit_estimator(est, stat, data.n, out.cv.lambda, lambda_pilot);
    return out;
}

}  // namespace npg
