#pragma once

#include <vector>

#include "npg/matrix.hpp"

namespace npg {

enum class LpStatus {
    Optimal,
    Infeasible,
    IterationLimit,
    // Not reachable from the l1-tube front end (its objective is bounded
    // below by zero); reported honestly if a raw standard-form problem is
    // unbounded.
    Unbounded,
};

struct LpSolution {
    std::vector<double> x;
    double objective = 0.0;
    LpStatus status = LpStatus::Optimal;
    int iterations = 0;
};

// min c.x  subject to  a_eq x = b_eq, x >= 0.
//
// Dense-tableau two-phase primal simplex with Bland's rule (entering: lowest
// index with negative reduced cost; leaving: ratio-test ties broken by lowest
// basic index). Columns are scaled to unit max-abs before solving and the
// solution is unscaled afterwards. Redundant rows are removed during phase 1.
// Feasibility and reduced-cost tolerances are 1e-9 on the scaled problem;
// the pivot budget is 50 * (rows + cols).
LpSolution solve_standard_form(const std::vector<double>& c, const Matrix& a_eq,
                               const std::vector<double>& b_eq);

// min || objective_weights o beta ||_1  subject to
//   |a beta - b| <= tube_widths   (entrywise).
struct L1ConstrainedProblem {
    Matrix a;                             // m x q
    std::vector<double> b;                // m
    std::vector<double> tube_widths;      // m, >= 0
    std::vector<double> objective_weights;  // q, > 0
};

// Splits beta = u - v (u, v >= 0) and adds a slack per tube side. At a
// simplex vertex u_j and v_j cannot both be basic (their columns are
// negatives of each other), so u_j * v_j == 0 and the LP objective equals
// || w o beta ||_1 exactly. Fast path: whenever |b| <= tube_widths holds
// entrywise the zero vector is feasible and optimal, and is returned without
// running the simplex; in particular the problem is always feasible in that
// case. Returns beta in LpSolution::x.
LpSolution solve_l1_tube(const L1ConstrainedProblem& problem);

}  // namespace npg
