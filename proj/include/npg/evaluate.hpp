#pragma once

#include "npg/linalg.hpp"
#include "npg/neighborhood.hpp"
#include "npg/simulate.hpp"

namespace npg {

struct EvalReport {
    double err_op2 = 0.0;
    double err_op1 = 0.0;
    double err_fro = 0.0;
    double err_max = 0.0;
    int fp = 0;
    int fn = 0;
    bool sign_consistent = false;
};

// matrix_norm(theta_hat - theta_star, which).
double estimation_error(const SymMatrix& theta_hat, const GroundTruth& truth,
                        MatrixNorm which);

// False positives / false negatives over unordered off-diagonal pairs.
std::pair<int, int> selection_counts(const GraphSelection& selected,
                                     const GroundTruth& truth);

// True iff signs match on the true support (entries must exceed 1e-8 in
// magnitude) and every off-support off-diagonal is zero to 1e-8.
bool sign_consistency(const SymMatrix& theta_hat, const GroundTruth& truth);

// Support of a precision estimate: off-diagonals with |theta_ij| > 1e-8.
GraphSelection support_of(const SymMatrix& theta, double tol = 1e-8);

EvalReport evaluate_estimate(const SymMatrix& theta_hat, const GraphSelection& selected,
                             const GroundTruth& truth);

// Sample mean and the standard error (sample SD / sqrt(count)).
std::pair<double, double> mean_and_se(const std::vector<double>& values);

}  // namespace npg
