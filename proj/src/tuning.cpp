#include "npg/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

#include "npg/linalg.hpp"
#include "npg/parallel.hpp"
#include "npg/rng.hpp"

namespace npg {

std::vector<double> lambda_grid_from_max(double lambda_max, int size, double ratio) {
    if (size < 2) throw InvalidInput("lambda_grid: size must be >= 2");
    if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidInput("lambda_grid: ratio must be in (0, 1)");
    if (!(lambda_max > 0.0))
        throw DegenerateGrid("lambda_grid: lambda_max is zero (no off-diagonal signal)");
    std::vector<double> grid(size);
    for (int i = 0; i < size; ++i)
        grid[i] = lambda_max * std::pow(ratio, static_cast<double>(i) / (size - 1));
    return grid;
}

std::vector<double> lambda_grid(const SymMatrix& r, int size, double ratio) {
    double lambda_max = 0.0;
    for (int i = 0; i < r.dim() - 1; ++i)
        for (int j = i + 1; j < r.dim(); ++j)
            lambda_max = std::max(lambda_max, std::abs(r(i, j)));
    return lambda_grid_from_max(lambda_max, size, ratio);
}

std::vector<double> lambda_grid(const RankCorrEstimate& r, int size, double ratio) {
    return lambda_grid(r.r_adjusted, size, ratio);
}

std::vector<std::vector<int>> cv_folds(int n, int folds, uint64_t seed) {
    if (folds < 2) throw InvalidInput("cv_folds: need at least 2 folds");
    if (folds > n) throw InvalidInput("cv_folds: more folds than rows");
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng = Rng::substream(seed, 0x666f6c64ULL);  // "fold"
    for (int i = n - 1; i > 0; --i)
        std::swap(perm[i], perm[rng.next_below(static_cast<uint64_t>(i) + 1)]);
    std::vector<std::vector<int>> out(folds);
    for (int i = 0; i < n; ++i) out[i % folds].push_back(perm[i]);
    for (auto& fold : out) std::sort(fold.begin(), fold.end());
    return out;
}

namespace {

DataMatrix subset_rows(const DataMatrix& data, const std::vector<int>& rows) {
    DataMatrix out(static_cast<int>(rows.size()), data.p);
    out.column_names = data.column_names;
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < data.p; ++j) out(static_cast<int>(i), j) = data(rows[i], j);
    return out;
}

// Held-out statistic for scoring. Rank correlation needs >= 3 rows; tiny
// test folds (leave-one-out) fall back to the outer-product Gaussian
// surrogate on rows standardized by the training fold.
SymMatrix test_statistic(const DataMatrix& test, const DataMatrix& train) {
    if (test.n >= 3) {
        try {
            return rank_correlation_matrix(test).r_adjusted;
        } catch (const ConstantColumnError&) {
            // fall through to the surrogate
        }
    }
    const int p = train.p;
    std::vector<double> mean(p, 0.0), sd(p, 0.0);
    for (int j = 0; j < p; ++j) {
        for (int i = 0; i < train.n; ++i) mean[j] += train(i, j);
        mean[j] /= train.n;
        for (int i = 0; i < train.n; ++i) {
            const double d = train(i, j) - mean[j];
            sd[j] += d * d;
        }
        sd[j] = std::sqrt(sd[j] / std::max(train.n - 1, 1));
        if (!(sd[j] > 0.0)) sd[j] = 1.0;
    }
    SymMatrix s(p);
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            double acc = 0.0;
            for (int t = 0; t < test.n; ++t)
                acc += (test(t, i) - mean[i]) / sd[i] * (test(t, j) - mean[j]) / sd[j];
            s.set(i, j, acc / test.n);
        }
    }
    return s;
}

double score_fit(const SymMatrix& theta, const SymMatrix& test_stat, bool& projected) {
    double trace = 0.0;
    const int p = theta.dim();
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) trace += test_stat(i, j) * theta(j, i);
    double logdet;
    try {
        logdet = log_det_spd(theta);
    } catch (const PositiveDefinitenessError&) {
        projected = true;
        const std::vector<double> ev = sym_eigenvalues(theta);
        logdet = 0.0;
        for (double v : ev) logdet += std::log(std::max(v, 1e-4));
    }
    return trace - logdet;
}

}  // namespace

CvResult cross_validate(const DataMatrix& data, const CvEstimator& estimator,
                        const std::vector<double>& grid, int folds, uint64_t seed) {
    data.validate();
    if (grid.empty()) throw InvalidInput("cross_validate: empty grid");
    const auto fold_rows = cv_folds(data.n, folds, seed);
    const int nl = static_cast<int>(grid.size());

    // Per-fold statistics and prepared state, reused across the whole grid.
    std::vector<SymMatrix> train_stats(folds), test_stats(folds);
    std::vector<std::shared_ptr<const void>> prepared(folds);
    std::vector<int> train_sizes(folds, 0);
    std::vector<std::string> fold_errors(folds);
    parallel_for(folds, [&](int64_t f) {
        try {
            std::vector<int> train_rows;
            for (int i = 0; i < data.n; ++i) train_rows.push_back(i);
            for (int r : fold_rows[f])
                train_rows.erase(std::find(train_rows.begin(), train_rows.end(), r));
            const DataMatrix train = subset_rows(data, train_rows);
            const DataMatrix test = subset_rows(data, fold_rows[f]);
            train_sizes[f] = train.n;
            train_stats[f] = estimator.statistic(train);
            test_stats[f] = test_statistic(test, train);
            if (estimator.prepare) prepared[f] = estimator.prepare(train_stats[f], train.n);
        } catch (const std::exception& e) {
            fold_errors[f] = e.what();
        }
    });
    for (int f = 0; f < folds; ++f)
        if (!fold_errors[f].empty())
            throw Error("cross_validate: fold " + std::to_string(f) + " setup failed: " +
                        fold_errors[f]);

    // (fold x lambda) fits.
    std::vector<double> scores(static_cast<size_t>(folds) * nl,
                               std::numeric_limits<double>::quiet_NaN());
    std::vector<uint8_t> failed(static_cast<size_t>(folds) * nl, 0);
    std::vector<uint8_t> projected(static_cast<size_t>(folds) * nl, 0);
    parallel_for(static_cast<int64_t>(folds) * nl, [&](int64_t t) {
        const int f = static_cast<int>(t / nl);
        const int l = static_cast<int>(t % nl);
        try {
            const SymMatrix theta = estimator.fit(train_stats[f], train_sizes[f], grid[l],
                                                  prepared[f] ? prepared[f].get() : nullptr);
            bool proj = false;
            scores[t] = score_fit(theta, test_stats[f], proj);
            projected[t] = proj ? 1 : 0;
        } catch (const std::exception&) {
            failed[t] = 1;
        }
    });

    CvResult result;
    result.grid = grid;
    result.mean_scores.assign(nl, std::numeric_limits<double>::quiet_NaN());
    result.fold_failures.assign(nl, 0);
    int best = -1;
    for (int l = 0; l < nl; ++l) {
        int fails = 0;
        double sum = 0.0;
        for (int f = 0; f < folds; ++f) {
            const size_t t = static_cast<size_t>(f) * nl + l;
            if (failed[t])
                ++fails;
            else
                sum += scores[t];
            if (projected[t]) result.used_pd_projection = true;
        }
        result.fold_failures[l] = fails;
        if (fails > 0) continue;  // excluded
        result.mean_scores[l] = sum / folds;
        // Grid is descending, so strict improvement keeps ties at larger lambda.
        if (best < 0 || result.mean_scores[l] < result.mean_scores[best]) best = l;
    }
    if (best < 0) throw Error("cross_validate: every lambda failed on some fold");
    for (int l = 0; l < nl; ++l) {
        if (result.fold_failures[l] > 0)
            std::cerr << "npg: cross-validation excluded lambda = " << grid[l] << " ("
                      << result.fold_failures[l] << " failing folds)\n";
    }
    result.lambda = grid[best];
    return result;
}

}  // namespace npg
