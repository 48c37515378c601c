#pragma once

#include <optional>
#include <string>
#include <vector>

#include "npg/clime.hpp"
#include "npg/data.hpp"
#include "npg/neighborhood.hpp"
#include "npg/tuning.hpp"

namespace npg {

enum class EstimatorKind { Glasso, Nds, Nads, Clime, Aclime, Mb };

// A named estimator configuration: Table-2 style names such as "GLASSO",
// "R-NADS.ai", "MB.au". The R- prefix selects the rank-based statistic; the
// .au / .ai suffix selects union / intersection aggregation for the
// neighborhood-family selection.
struct EstimatorModel {
    std::string name;
    EstimatorKind kind = EstimatorKind::Glasso;
    bool rank_based = false;
    std::optional<Aggregation> aggregation;
};

// Throws ConfigError for unknown names, including rank-based MB, which is
// refused: the adjusted Spearman matrix can be indefinite, and the
// neighborhood lasso objective is then unbounded.
EstimatorModel parse_estimator(const std::string& name);

// R-hat^s for rank-based estimators, sample Pearson correlation otherwise.
SymMatrix estimator_statistic(const DataMatrix& data, const EstimatorModel& est);

struct FitResult {
    PrecisionEstimate estimate;           // symmetrized
    GraphSelection selection;
    double lambda = 0.0;
    std::optional<double> lambda_pilot;   // adaptive estimators only
};

// Fit at fixed lambda(s) on a precomputed statistic. Adaptive estimators
// require lambda_pilot (PilotRequired otherwise); non-adaptive ones ignore it.
FitResult fit_estimator(const EstimatorModel& est, const SymMatrix& stat, int n,
                        double lambda, std::optional<double> lambda_pilot);

// Convenience overload computing the statistic from data.
FitResult fit_estimator(const EstimatorModel& est, const DataMatrix& data, double lambda,
                        std::optional<double> lambda_pilot);

struct TuneOptions {
    int folds = 5;
    int grid_size = 30;
    double grid_ratio = 0.05;
    uint64_t seed = 0;
};

struct TunedFit {
    FitResult fit;
    CvResult cv;                      // the (final-stage) cross-validation
    std::optional<CvResult> cv_pilot; // stage-1 CV for adaptive estimators
};

// Cross-validated fit. Adaptive estimators tune in two stages: the pilot
// lambda comes from CV of the plain estimator, then the adaptive lambda is
// CV'd on a grid scaled by the pilot weights.
TunedFit fit_with_cv(const DataMatrix& data, const EstimatorModel& est,
                     const TuneOptions& options);

// The CvEstimator wiring for a plain (non-adaptive) estimator, exposed for
// the spec'd cross_validate(data, estimator, grid, folds, seed) entry point.
CvEstimator make_cv_estimator(const EstimatorModel& est);

inline CvResult cross_validate(const DataMatrix& data, const EstimatorModel& est,
                               const std::vector<double>& grid, int folds, uint64_t seed) {
    return cross_validate(data, make_cv_estimator(est), grid, folds, seed);
}

}  // namespace npg
