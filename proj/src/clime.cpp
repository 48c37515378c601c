#include "npg/clime.hpp"

#include <algorithm>
#include <cmath>

#include "npg/linalg.hpp"
#include "npg/lp.hpp"
#include "npg/parallel.hpp"

namespace npg {

namespace {

const char* status_name(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "Optimal";
        case LpStatus::Infeasible: return "Infeasible";
        case LpStatus::IterationLimit: return "IterationLimit";
        case LpStatus::Unbounded: return "Unbounded";
    }
    return "?";
}

Matrix solve_columns(const SymMatrix& r, double lambda, const Matrix* weights,
                     bool parallel) {
    const int p = r.dim();
    Matrix theta(p, p);
    auto solve_one = [&](int64_t k) {
        std::vector<double> w;
        const std::vector<double>* wp = nullptr;
        if (weights) {
            w.resize(p);
            for (int i = 0; i < p; ++i) w[i] = (*weights)(i, static_cast<int>(k));
            wp = &w;
        }
        const std::vector<double> col = clime_column(r, static_cast<int>(k), lambda, wp);
        for (int i = 0; i < p; ++i) theta(i, static_cast<int>(k)) = col[i];
    };
    if (parallel) {
        parallel_for(p, solve_one);
    } else {
        for (int64_t k = 0; k < p; ++k) solve_one(k);
    }
    return theta;
}

PrecisionEstimate clime_impl(const SymMatrix& r, const ClimeSettings& settings,
                             bool parallel) {
    if (!(settings.lambda >= 0.0)) throw InvalidInput("clime: lambda must be >= 0");
    if (settings.hard_threshold && !(*settings.hard_threshold >= 0.0))
        throw InvalidInput("clime: hard threshold must be >= 0");

    const int p = r.dim();
    Matrix weights;
    if (settings.adaptive) {
        if (!settings.lambda_pilot)
            throw PilotRequired("adaptive CLIME requires a pilot lambda");
        if (settings.n < 1)
            throw InvalidInput("adaptive CLIME requires the sample size n for the weights");
        Matrix pilot = solve_columns(r, *settings.lambda_pilot, nullptr, parallel);
        if (settings.weights_from_symmetrized_pilot) {
            const SymMatrix sym = symmetrize_min_magnitude(pilot);
            pilot = sym.to_matrix();
        }
        weights = Matrix(p, p);
        const double ridge = 1.0 / static_cast<double>(settings.n);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j)
                weights(i, j) = 1.0 / (std::abs(pilot(i, j)) + ridge);
    }

    Matrix raw = solve_columns(r, settings.lambda, settings.adaptive ? &weights : nullptr,
                               parallel);
    SymMatrix theta = symmetrize_min_magnitude(raw);
    if (settings.hard_threshold)
        theta = hard_threshold_offdiag(theta, *settings.hard_threshold);

    PrecisionEstimate est;
    est.theta = std::move(theta);
    est.estimator = settings.adaptive ? EstimatorTag::Aclime : EstimatorTag::Clime;
    est.lambda = settings.lambda;
    return est;
}

}  // namespace

std::vector<double> clime_column(const SymMatrix& r, int k, double lambda,
                                 const std::vector<double>* weights) {
    const int p = r.dim();
    if (k < 0 || k >= p) throw InvalidInput("clime_column: index out of range");
    if (!(lambda >= 0.0)) throw InvalidInput("clime_column: lambda must be >= 0");

    if (lambda == 0.0 && !weights) {
        // Unique feasible point set {theta : r theta = e_k}.
        std::vector<double> e(p, 0.0);
        e[k] = 1.0;
        try {
            return solve_spd(r, e);
        } catch (const PositiveDefinitenessError&) {
            throw SingularSubmatrix("clime_column: lambda == 0 requires invertible input");
        }
    }

    L1ConstrainedProblem prob;
    prob.a = r.to_matrix();
    prob.b.assign(p, 0.0);
    prob.b[k] = 1.0;
    prob.tube_widths.assign(p, lambda);
    prob.objective_weights.assign(p, 1.0);
    if (weights) {
        if (static_cast<int>(weights->size()) != p)
            throw DimensionMismatch("clime_column: weight vector size mismatch");
        for (int i = 0; i < p; ++i) {
            prob.tube_widths[i] = lambda * (*weights)[i];
            prob.objective_weights[i] = (*weights)[i];
        }
    }

    LpSolution sol = solve_l1_tube(prob);
    if (sol.status != LpStatus::Optimal)
        throw LpFailure("CLIME column " + std::to_string(k) + " LP ended " +
                        status_name(sol.status));
    for (double& x : sol.x)
        if (std::abs(x) <= 1e-8) x = 0.0;
    return sol.x;
}

PrecisionEstimate clime_solve(const SymMatrix& r, const ClimeSettings& settings) {
    return clime_impl(r, settings, true);
}

PrecisionEstimate clime_solve_serial(const SymMatrix& r, const ClimeSettings& settings) {
    return clime_impl(r, settings, false);
}

SymMatrix symmetrize_min_magnitude(const Matrix& theta_hat) {
    const int p = theta_hat.rows();
    if (theta_hat.cols() != p)
        throw DimensionMismatch("symmetrize_min_magnitude: matrix not square");
    SymMatrix out(p);
    for (int i = 0; i < p; ++i) {
        out.set(i, i, theta_hat(i, i));
        for (int j = i + 1; j < p; ++j) {
            const double ij = theta_hat(i, j);
            const double ji = theta_hat(j, i);
            out.set(i, j, std::abs(ij) <= std::abs(ji) ? ij : ji);
        }
    }
    return out;
}

SymMatrix hard_threshold_offdiag(const SymMatrix& theta, double tau) {
    const int p = theta.dim();
    SymMatrix out = theta;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (std::abs(theta(i, j)) < tau) out.set(i, j, 0.0);
    return out;
}

}  // namespace npg
