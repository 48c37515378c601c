#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "npg/data.hpp"
#include "npg/matrix.hpp"
#include "npg/rank_corr.hpp"

namespace npg {

// Log-spaced descending grid from lambda_max down to ratio * lambda_max.
// lambda_max is the largest off-diagonal |r_ij|, where the trivial (fully
// sparse) solution starts. Throws DegenerateGrid when lambda_max == 0.
std::vector<double> lambda_grid(const RankCorrEstimate& r, int size, double ratio);
std::vector<double> lambda_grid(const SymMatrix& r, int size, double ratio);
std::vector<double> lambda_grid_from_max(double lambda_max, int size, double ratio);

// Seeded permutation split; fold sizes differ by at most one.
std::vector<std::vector<int>> cv_folds(int n, int folds, uint64_t seed);

// One estimator as seen by cross-validation.
struct CvEstimator {
    // Training-fold statistic (adjusted rank correlation, Pearson correlation, ...).
    std::function<SymMatrix(const DataMatrix& train)> statistic;
    // Optional per-fold preparation shared across the lambda grid (e.g. the
    // adaptive pilot weights). May be null.
    std::function<std::shared_ptr<const void>(const SymMatrix& stat, int n_train)> prepare;
    // Fits at one lambda; must return a symmetric precision estimate.
    std::function<SymMatrix(const SymMatrix& stat, int n_train, double lambda,
                            const void* prepared)>
        fit;
};

struct CvResult {
    double lambda = 0.0;
    std::vector<double> grid;
    std::vector<double> mean_scores;  // NaN where the lambda was excluded
    std::vector<int> fold_failures;   // per-lambda count of failed folds
    bool used_pd_projection = false;
};

// K-fold cross-validation of the regularization parameter. Each held-out
// fold is scored with the Gaussian negative log-likelihood surrogate
//   tr(R_test Theta) - log det(Theta)
// on the held-out adjusted rank correlation (the same loss for every
// estimator). A non-PD Theta is scored through the log-determinant of its
// PD projection (eigenvalue floor 1e-4) and flagged. A lambda that fails on
// any fold is excluded. The minimizing lambda wins; ties go to the larger
// lambda. (fold x lambda) fits run in parallel; the reduction is
// deterministic.
CvResult cross_validate(const DataMatrix& data, const CvEstimator& estimator,
                        const std::vector<double>& grid, int folds, uint64_t seed);

}  // namespace npg
