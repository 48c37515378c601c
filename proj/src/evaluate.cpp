#include "npg/evaluate.hpp"

#include <cmath>

namespace npg {

double estimation_error(const SymMatrix& theta_hat, const GroundTruth& truth,
                        MatrixNorm which) {
    if (theta_hat.dim() != truth.theta_star.dim())
        throw DimensionMismatch("estimation_error: dimension mismatch");
    return matrix_norm(theta_hat - truth.theta_star, which);
}

std::pair<int, int> selection_counts(const GraphSelection& selected,
                                     const GroundTruth& truth) {
    if (selected.p != truth.support.p)
        throw DimensionMismatch("selection_counts: dimension mismatch");
    int fp = 0, fn = 0;
    for (const auto& e : selected.edges)
        if (!truth.support.edges.count(e)) ++fp;
    for (const auto& e : truth.support.edges)
        if (!selected.edges.count(e)) ++fn;
    return {fp, fn};
}

bool sign_consistency(const SymMatrix& theta_hat, const GroundTruth& truth) {
    const int p = truth.theta_star.dim();
    if (theta_hat.dim() != p) throw DimensionMismatch("sign_consistency: dimension mismatch");
    constexpr double tol = 1e-8;
    for (int i = 0; i < p - 1; ++i) {
        for (int j = i + 1; j < p; ++j) {
            const double truth_ij = truth.theta_star(i, j);
            const double hat_ij = theta_hat(i, j);
            if (std::abs(truth_ij) > 1e-12) {
                if (std::abs(hat_ij) <= tol) return false;
                if ((hat_ij > 0.0) != (truth_ij > 0.0)) return false;
            } else if (std::abs(hat_ij) > tol) {
                return false;
            }
        }
    }
    return true;
}

GraphSelection support_of(const SymMatrix& theta, double tol) {
    GraphSelection g;
    g.p = theta.dim();
    for (int i = 0; i < g.p - 1; ++i) {
        for (int j = i + 1; j < g.p; ++j) {
            if (std::abs(theta(i, j)) > tol) {
                g.edges.insert({i, j});
                g.signs[{i, j}] = theta(i, j) > 0.0 ? 1 : -1;
            }
        }
    }
    return g;
}

EvalReport evaluate_estimate(const SymMatrix& theta_hat, const GraphSelection& selected,
                             const GroundTruth& truth) {
    EvalReport r;
    r.err_op2 = estimation_error(theta_hat, truth, MatrixNorm::Op2);
    r.err_op1 = estimation_error(theta_hat, truth, MatrixNorm::Op1);
    r.err_fro = estimation_error(theta_hat, truth, MatrixNorm::Fro);
    r.err_max = estimation_error(theta_hat, truth, MatrixNorm::Max);
    std::tie(r.fp, r.fn) = selection_counts(selected, truth);
    r.sign_consistent = sign_consistency(theta_hat, truth);
    return r;
}

std::pair<double, double> mean_and_se(const std::vector<double>& values) {
    const size_t n = values.size();
    if (n == 0) return {0.0, 0.0};
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    if (n == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return {mean, sd / std::sqrt(static_cast<double>(n))};
}

}  // namespace npg
