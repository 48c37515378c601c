#include "npg/neighborhood.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "npg/clime.hpp"
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

// Drops row/column `node` of s into a (p-1) x (p-1) matrix and the
// corresponding column vector.
void split_node(const SymMatrix& s, int node, Matrix& a, std::vector<double>& b) {
    const int p = s.dim();
    a = Matrix(p - 1, p - 1);
    b.assign(p - 1, 0.0);
    for (int i = 0, ii = 0; i < p; ++i) {
        if (i == node) continue;
        for (int j = 0, jj = 0; j < p; ++j) {
            if (j == node) continue;
            a(ii, jj) = s(i, j);
            ++jj;
        }
        b[ii] = s(i, node);
        ++ii;
    }
}

void finalize_fit(NeighborhoodFit& fit, int node, int p) {
    fit.node = node;
    fit.support.clear();
    for (int j = 0, jj = 0; j < p; ++j) {
        if (j == node) continue;
        if (std::abs(fit.beta[jj]) <= kSupportZeroTol)
            fit.beta[jj] = 0.0;
        else
            fit.support.push_back(j);
        ++jj;
    }
}

NeighborhoodFit solve_tube_fit(const SymMatrix& s, int node, double lambda,
                               const std::vector<double>* weights) {
    const int p = s.dim();
    if (node < 0 || node >= p) throw InvalidInput("node index out of range");
    if (!(lambda >= 0.0)) throw InvalidInput("lambda must be >= 0");

    L1ConstrainedProblem prob;
    split_node(s, node, prob.a, prob.b);

    if (lambda == 0.0 && !weights) {
        // Unique feasible point: solve the equality system directly.
        SymMatrix sub(p - 1);
        for (int i = 0; i < p - 1; ++i)
            for (int j = i; j < p - 1; ++j) sub.set(i, j, prob.a(i, j));
        NeighborhoodFit fit;
        fit.lambda = 0.0;
        try {
            fit.beta = solve_spd(sub, prob.b);
        } catch (const PositiveDefinitenessError&) {
            throw SingularSubmatrix("lambda == 0 requires an invertible (positive definite) "
                                    "submatrix at node " + std::to_string(node));
        }
        finalize_fit(fit, node, p);
        return fit;
    }

    prob.tube_widths.assign(p - 1, lambda);
    prob.objective_weights.assign(p - 1, 1.0);
    if (weights) {
        for (int j = 0; j < p - 1; ++j) {
            prob.tube_widths[j] = lambda * (*weights)[j];
            prob.objective_weights[j] = (*weights)[j];
        }
    }

    LpSolution sol = solve_l1_tube(prob);
    if (sol.status != LpStatus::Optimal)
        throw LpFailure("neighborhood LP at node " + std::to_string(node) + " ended " +
                        status_name(sol.status));

    NeighborhoodFit fit;
    fit.beta = std::move(sol.x);
    fit.lambda = lambda;
    if (weights) {
        fit.adaptive = true;
        fit.weights = *weights;
    }
    finalize_fit(fit, node, p);
    return fit;
}

}  // namespace

NeighborhoodFit nds_fit(const SymMatrix& s, int node, double lambda) {
    return solve_tube_fit(s, node, lambda, nullptr);
}

NeighborhoodFit nads_fit_with_weights(const SymMatrix& s, int node,
                                      const std::vector<double>& weights,
                                      double lambda_adaptive) {
    return solve_tube_fit(s, node, lambda_adaptive, &weights);
}

NeighborhoodFit nads_fit(const SymMatrix& s, int node, double lambda_pilot,
                         double lambda_adaptive, int n) {
    if (n < 1) throw InvalidInput("nads_fit: sample size n must be >= 1");
    NeighborhoodFit pilot = nds_fit(s, node, lambda_pilot);
    std::vector<double> w(pilot.beta.size());
    for (size_t j = 0; j < w.size(); ++j)
        w[j] = 1.0 / (std::abs(pilot.beta[j]) + 1.0 / static_cast<double>(n));
    return solve_tube_fit(s, node, lambda_adaptive, &w);
}

std::vector<NeighborhoodFit> nds_fit_all(const SymMatrix& s, double lambda) {
    const int p = s.dim();
    std::vector<NeighborhoodFit> fits(p);
    parallel_for(p, [&](int64_t k) { fits[k] = nds_fit(s, static_cast<int>(k), lambda); });
    return fits;
}

std::vector<NeighborhoodFit> nds_fit_all_serial(const SymMatrix& s, double lambda) {
    const int p = s.dim();
    std::vector<NeighborhoodFit> fits(p);
    for (int k = 0; k < p; ++k) fits[k] = nds_fit(s, k, lambda);
    return fits;
}

std::vector<NeighborhoodFit> nads_fit_all(const SymMatrix& s, double lambda_pilot,
                                          double lambda_adaptive, int n) {
    const int p = s.dim();
    std::vector<NeighborhoodFit> fits(p);
    parallel_for(p, [&](int64_t k) {
        fits[k] = nads_fit(s, static_cast<int>(k), lambda_pilot, lambda_adaptive, n);
    });
    return fits;
}

NeighborhoodFit mb_fit(const SymMatrix& s, int node, double lambda) {
    const int p = s.dim();
    if (node < 0 || node >= p) throw InvalidInput("node index out of range");
    Matrix a;
    std::vector<double> b;
    split_node(s, node, a, b);
    NeighborhoodFit fit;
    fit.beta.assign(p - 1, 0.0);
    // The displayed objective is beta' S beta - 2 beta' b + lambda ||beta||_1,
    // which is 2x the kernel's 0.5 beta' S beta - beta' b form, so the kernel
    // gets lambda / 2.
    lasso_coordinate_descent(a, b, lambda / 2.0, fit.beta, 1e-9, 10000);
    fit.lambda = lambda;
    finalize_fit(fit, node, p);
    return fit;
}

std::vector<NeighborhoodFit> mb_fit_all(const SymMatrix& s, double lambda) {
    const int p = s.dim();
    std::vector<NeighborhoodFit> fits(p);
    parallel_for(p, [&](int64_t k) { fits[k] = mb_fit(s, static_cast<int>(k), lambda); });
    return fits;
}

Matrix reconstruct_precision(const std::vector<NeighborhoodFit>& fits, const SymMatrix& s) {
    const int p = s.dim();
    if (static_cast<int>(fits.size()) != p)
        throw DimensionMismatch("reconstruct_precision: need all p node fits");
    Matrix theta(p, p);
    for (int k = 0; k < p; ++k) {
        const NeighborhoodFit& fit = fits[k];
        if (fit.node != k || static_cast<int>(fit.beta.size()) != p - 1)
            throw InvalidInput("reconstruct_precision: fit for node " + std::to_string(k) +
                               " missing or malformed");
        // quad = beta' s_(k) beta - 2 beta' s_{(k),k}
        double quad = 0.0;
        for (int i = 0, ii = 0; i < p; ++i) {
            if (i == k) continue;
            const double bi = fit.beta[ii];
            if (bi != 0.0) {
                double acc = 0.0;
                for (int j = 0, jj = 0; j < p; ++j) {
                    if (j == k) continue;
                    acc += s(i, j) * fit.beta[jj];
                    ++jj;
                }
                quad += bi * (acc - 2.0 * s(i, k));
            }
            ++ii;
        }
        const double denom = quad + 1.0;
        if (denom <= 1e-10) throw NonpositiveResidual(k, denom);
        const double tkk = 1.0 / denom;
        theta(k, k) = tkk;
        for (int i = 0, ii = 0; i < p; ++i) {
            if (i == k) continue;
            theta(i, k) = -tkk * fit.beta[ii];
            ++ii;
        }
    }
    return theta;
}

SymMatrix symmetrize_l1(const Matrix& theta_hat) {
    const int p = theta_hat.rows();
    if (theta_hat.cols() != p) throw DimensionMismatch("symmetrize_l1: matrix not square");
    if (!theta_hat.all_finite()) throw InvalidInput("symmetrize_l1: non-finite entries");

    // Variables: x_ij (i < j, free, split into u - v), e_ij for every ordered
    // off-diagonal pair, and the epigraph t. The diagonal is fixed at
    // theta_hat's: deviating there can only grow its column sum.
    // Rows: e_ij >= +-(x - theta_hat_ij) and per-column sums vs t.
    const int npairs = p * (p - 1) / 2;
    auto pair_index = [&](int i, int j) {  // i < j
        return i * p - i * (i + 1) / 2 + (j - i - 1);
    };
    auto evar_index = [&](int i, int j) {  // ordered, i != j
        return i * (p - 1) + (j > i ? j - 1 : j);
    };
    const int n_e = p * (p - 1);
    const int off = 2 * npairs;      // e block offset
    const int t_var = off + n_e;     // epigraph variable
    const int n_slack_rows = 2 * n_e + p;
    const int nvars = t_var + 1 + n_slack_rows;  // + one slack per row

    Matrix a(n_slack_rows, nvars);
    std::vector<double> b(n_slack_rows, 0.0), c(nvars, 0.0);
    int row = 0;
    // e_ij - (x_pair - theta_hat_ij) >= 0  and  e_ij + (x_pair - theta_hat_ij) >= 0
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (i == j) continue;
            const int pi = (i < j) ? pair_index(i, j) : pair_index(j, i);
            const int e = off + evar_index(i, j);
            // e - x + theta >= 0  ->  e - u + v - slack = -theta
            a(row, e) = 1.0;
            a(row, 2 * pi) = -1.0;
            a(row, 2 * pi + 1) = 1.0;
            a(row, t_var + 1 + row) = -1.0;
            b[row] = -theta_hat(i, j);
            ++row;
            // e + x - theta >= 0  ->  e + u - v - slack = theta
            a(row, e) = 1.0;
            a(row, 2 * pi) = 1.0;
            a(row, 2 * pi + 1) = -1.0;
            a(row, t_var + 1 + row) = -1.0;
            b[row] = theta_hat(i, j);
            ++row;
        }
    }
    // Column sums: sum_i e_ij <= t  ->  t - sum_i e_ij - slack = 0.
    for (int j = 0; j < p; ++j) {
        a(row, t_var) = 1.0;
        for (int i = 0; i < p; ++i)
            if (i != j) a(row, off + evar_index(i, j)) = -1.0;
        a(row, t_var + 1 + row) = -1.0;
        b[row] = 0.0;
        ++row;
    }
    c[t_var] = 1.0;

    LpSolution sol = solve_standard_form(c, a, b);
    if (sol.status != LpStatus::Optimal)
        throw LpFailure(std::string("symmetrize_l1 LP ended ") + status_name(sol.status));

    SymMatrix out(p);
    for (int i = 0; i < p; ++i) out.set(i, i, theta_hat(i, i));
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) {
            const int pi = pair_index(i, j);
            out.set(i, j, sol.x[2 * pi] - sol.x[2 * pi + 1]);
        }

    // Internal guard: the LP must not lose to the entrywise average.
    auto l1_objective = [&](const SymMatrix& cand) {
        double worst = 0.0;
        for (int j = 0; j < p; ++j) {
            double colsum = 0.0;
            for (int i = 0; i < p; ++i) colsum += std::abs(cand(i, j) - theta_hat(i, j));
            worst = std::max(worst, colsum);
        }
        return worst;
    };
    SymMatrix average = SymMatrix::from_average(theta_hat);
    if (l1_objective(out) > l1_objective(average) + 1e-9) {
        std::cerr << "npg: symmetrize_l1 LP lost to the average candidate; using average\n";
        return average;
    }
    return out;
}

SymMatrix symmetrize_l1_or_fallback(const Matrix& theta_hat, int exact_limit) {
    if (theta_hat.rows() <= exact_limit) return symmetrize_l1(theta_hat);
    std::cerr << "npg: p = " << theta_hat.rows() << " > " << exact_limit
              << "; symmetrizing with the entrywise min-magnitude rule instead of the LP\n";
    return symmetrize_min_magnitude(theta_hat);
}

GraphSelection aggregate(const std::vector<NeighborhoodFit>& fits, Aggregation mode, int p) {
    if (static_cast<int>(fits.size()) != p)
        throw DimensionMismatch("aggregate: need all p node supports");
    std::vector<std::vector<bool>> in_support(p, std::vector<bool>(p, false));
    for (const NeighborhoodFit& fit : fits)
        for (int j : fit.support) in_support[fit.node][j] = true;

    GraphSelection g;
    g.p = p;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            const bool ij = in_support[i][j];
            const bool ji = in_support[j][i];
            const bool keep = (mode == Aggregation::Union) ? (ij || ji) : (ij && ji);
            if (keep) g.edges.insert({i, j});
        }
    }
    return g;
}

}  // namespace npg
