#pragma once

#include <span>
#include <vector>

#include "npg/matrix.hpp"

namespace npg {

struct GlassoSettings {
    double lambda = 0.0;       // off-diagonal penalty
    int max_outer_sweeps = 200;
    double outer_tol = 1e-5;   // max-norm change of W per sweep
    double inner_tol = 1e-7;
    int inner_max_iter = 1000;
};

enum class EstimatorTag { Glasso, Nds, Nads, Clime, Aclime, Mb };

struct PrecisionEstimate {
    SymMatrix theta;
    EstimatorTag estimator = EstimatorTag::Glasso;
    double lambda = 0.0;
    int iterations = 0;
    bool converged = true;
};

// Solves  min_{Theta > 0}  -log det(Theta) + tr(r Theta) + lambda * sum_{i != j} |theta_ij|
// by blockwise coordinate descent on the working covariance W: cycle over
// columns, solve each (p-1)-dimensional lasso subproblem by cyclic coordinate
// descent with soft thresholding, and recover Theta from the final W and the
// lasso coefficients.
//
// r may be indefinite; a strictly positive diagonal plus lambda > 0 ensures a
// unique positive definite solution, so lambda == 0 is rejected unless r is
// positive definite. Nonpositive diagonal entries are rejected. If the sweep
// budget runs out, the best iterate is returned with converged == false
// rather than throwing.
PrecisionEstimate glasso_solve(const SymMatrix& r, const GlassoSettings& settings);

// Warm-started fits along a strictly descending lambda path.
std::vector<PrecisionEstimate> glasso_path(const SymMatrix& r,
                                           const std::vector<double>& lambdas,
                                           GlassoSettings settings);

// Inner kernel, shared with the neighborhood-lasso baseline:
//   min_beta  0.5 beta' v beta - beta' u + lambda ||beta||_1
// by cyclic coordinate descent with soft thresholding, warm-started from the
// passed-in beta. Returns the number of full passes used.
int lasso_coordinate_descent(const Matrix& v, std::span<const double> u, double lambda,
                             std::vector<double>& beta, double tol, int max_iter);

// Max-norm KKT residual of a candidate solution; used by tests and the
// acceptance suite. Checks, with w = theta^{-1}:
//   |w_ii - r_ii|                              on the diagonal,
//   |w_ij - r_ij| <= lambda (+slack)           off the support,
//   |w_ij - r_ij - lambda * sign(theta_ij)|    on the support.
struct KktReport {
    double diagonal_residual = 0.0;
    double offdiag_excess = 0.0;     // max(0, |w_ij - r_ij| - lambda) over i != j
    double support_residual = 0.0;   // sign-pattern consistency on the support
    bool positive_definite = false;
};
KktReport glasso_kkt_report(const SymMatrix& theta, const SymMatrix& r, double lambda,
                            double support_tol = 1e-8);

// The penalized negative log-likelihood objective of glasso_solve.
double glasso_objective(const SymMatrix& theta, const SymMatrix& r, double lambda);

}  // namespace npg
