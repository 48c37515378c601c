#include "npg/glasso.hpp"

#include <algorithm>
#include <cmath>

#include "npg/linalg.hpp"

namespace npg {

namespace {

double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

struct GlassoState {
    Matrix w;       // working covariance
    Matrix betas;   // p x (p-1) per-column lasso coefficients
};

PrecisionEstimate solve_with_state(const SymMatrix& r, const GlassoSettings& settings,
                                   GlassoState& state) {
    const int p = r.dim();
    const double lambda = settings.lambda;

    Matrix& w = state.w;
    Matrix& betas = state.betas;

    Matrix v(p - 1, p - 1);
    std::vector<double> u(p - 1), beta(p - 1), w12(p - 1);

    int sweeps = 0;
    bool converged = false;
    for (; sweeps < settings.max_outer_sweeps; ++sweeps) {
        double max_delta = 0.0;
        for (int col = 0; col < p; ++col) {
            // Subproblem blocks with row/column `col` removed.
            for (int i = 0, ii = 0; i < p; ++i) {
                if (i == col) continue;
                for (int j = 0, jj = 0; j < p; ++j) {
                    if (j == col) continue;
                    v(ii, jj) = w(i, j);
                    ++jj;
                }
                u[ii] = r(i, col);
                beta[ii] = betas(col, ii);
                ++ii;
            }

            lasso_coordinate_descent(v, u, lambda, beta, settings.inner_tol,
                                     settings.inner_max_iter);

            for (int ii = 0; ii < p - 1; ++ii) {
                double acc = 0.0;
                const double* vrow = v.row(ii);
                for (int jj = 0; jj < p - 1; ++jj) acc += vrow[jj] * beta[jj];
                w12[ii] = acc;
                betas(col, ii) = beta[ii];
            }
            for (int i = 0, ii = 0; i < p; ++i) {
                if (i == col) continue;
                max_delta = std::max(max_delta, std::abs(w(i, col) - w12[ii]));
                w(i, col) = w12[ii];
                w(col, i) = w12[ii];
                ++ii;
            }
        }
        if (max_delta <= settings.outer_tol) {
            converged = true;
            ++sweeps;
            break;
        }
    }

    // Recover Theta column by column: theta_kk = 1 / (w_kk - w12' beta),
    // theta_(k) = -theta_kk * beta.
    Matrix theta(p, p);
    for (int col = 0; col < p; ++col) {
        double quad = 0.0;
        for (int i = 0, ii = 0; i < p; ++i) {
            if (i == col) continue;
            quad += w(i, col) * betas(col, ii);
            ++ii;
        }
        const double tkk = 1.0 / (w(col, col) - quad);
        theta(col, col) = tkk;
        for (int i = 0, ii = 0; i < p; ++i) {
            if (i == col) continue;
            theta(i, col) = -tkk * betas(col, ii);
            ++ii;
        }
    }

    PrecisionEstimate est;
    est.theta = SymMatrix::from_average(theta);
    est.estimator = EstimatorTag::Glasso;
    est.lambda = lambda;
    est.iterations = sweeps;
    est.converged = converged;
    return est;
}

void validate_glasso_input(const SymMatrix& r, double lambda) {
    const int p = r.dim();
    if (p < 1) throw InvalidInput("glasso: empty input");
    if (!(lambda >= 0.0)) throw InvalidInput("glasso: lambda must be >= 0");
    for (int i = 0; i < p; ++i)
        if (!(r(i, i) > 0.0))
            throw InvalidInput("glasso: diagonal entry " + std::to_string(i) +
                               " is not strictly positive");
    if (lambda == 0.0 && !is_positive_definite(r))
        throw InvalidInput("glasso: lambda == 0 requires positive definite input "
                           "(the unpenalized problem is unbounded otherwise)");
}

GlassoState initial_state(const SymMatrix& r) {
    const int p = r.dim();
    GlassoState state;
    state.w = r.to_matrix();
    state.betas = Matrix(p, std::max(p - 1, 1));
    return state;
}

}  // namespace

int lasso_coordinate_descent(const Matrix& v, std::span<const double> u, double lambda,
                             std::vector<double>& beta, double tol, int max_iter) {
    const int q = v.rows();
    if (v.cols() != q || static_cast<int>(u.size()) != q ||
        static_cast<int>(beta.size()) != q)
        throw DimensionMismatch("lasso_coordinate_descent: dimension mismatch");

    int passes = 0;
    bool full_pass = true;  // alternate active-set passes with verifying full passes
    while (passes < max_iter) {
        ++passes;
        double max_change = 0.0;
        for (int j = 0; j < q; ++j) {
            if (!full_pass && beta[j] == 0.0) continue;
            const double* vrow = v.row(j);
            double acc = 0.0;
            for (int k = 0; k < q; ++k) acc += vrow[k] * beta[k];
            acc -= vrow[j] * beta[j];
            const double next = soft_threshold(u[j] - acc, lambda) / vrow[j];
            const double change = std::abs(next - beta[j]);
            if (change > max_change) max_change = change;
            beta[j] = next;
        }
        if (max_change <= tol) {
            if (full_pass) break;
            full_pass = true;
        } else {
            full_pass = false;
        }
    }
    return passes;
}

PrecisionEstimate glasso_solve(const SymMatrix& r, const GlassoSettings& settings) {
    validate_glasso_input(r, settings.lambda);
    GlassoState state = initial_state(r);
    return solve_with_state(r, settings, state);
}

std::vector<PrecisionEstimate> glasso_path(const SymMatrix& r,
                                           const std::vector<double>& lambdas,
                                           GlassoSettings settings) {
    for (size_t k = 0; k + 1 < lambdas.size(); ++k)
        if (!(lambdas[k] > lambdas[k + 1]))
            throw InvalidInput("glasso_path: lambdas must be strictly descending");
    for (double l : lambdas)
        if (!(l > 0.0)) throw InvalidInput("glasso_path: lambdas must be > 0");

    std::vector<PrecisionEstimate> out;
    out.reserve(lambdas.size());
    GlassoState state;
    for (size_t k = 0; k < lambdas.size(); ++k) {
        settings.lambda = lambdas[k];
        validate_glasso_input(r, settings.lambda);
        if (k == 0) state = initial_state(r);  // element k > 0 keeps the previous state
        out.push_back(solve_with_state(r, settings, state));
    }
    return out;
}

KktReport glasso_kkt_report(const SymMatrix& theta, const SymMatrix& r, double lambda,
                            double support_tol) {
    const int p = theta.dim();
    if (r.dim() != p) throw DimensionMismatch("glasso_kkt_report: dimension mismatch");
    KktReport rep;
    rep.positive_definite = is_positive_definite(theta);
    if (!rep.positive_definite) return rep;
    const SymMatrix w = inverse_spd(theta);
    for (int i = 0; i < p; ++i) {
        rep.diagonal_residual = std::max(rep.diagonal_residual, std::abs(w(i, i) - r(i, i)));
        for (int j = 0; j < p; ++j) {
            if (i == j) continue;
            const double resid = w(i, j) - r(i, j);
            rep.offdiag_excess = std::max(rep.offdiag_excess, std::abs(resid) - lambda);
            if (std::abs(theta(i, j)) > support_tol) {
                const double sign = theta(i, j) > 0.0 ? 1.0 : -1.0;
                rep.support_residual =
                    std::max(rep.support_residual, std::abs(resid - lambda * sign));
            }
        }
    }
    rep.offdiag_excess = std::max(rep.offdiag_excess, 0.0);
    return rep;
}

double glasso_objective(const SymMatrix& theta, const SymMatrix& r, double lambda) {
    const int p = theta.dim();
    double trace = 0.0, l1_off = 0.0;
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            trace += r(i, j) * theta(j, i);
            if (i != j) l1_off += std::abs(theta(i, j));
        }
    }
    return -log_det_spd(theta) + trace + lambda * l1_off;
}

}  // namespace npg
