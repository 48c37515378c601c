#pragma once

#include <optional>
#include <vector>

#include "npg/glasso.hpp"
#include "npg/matrix.hpp"
#include "npg/rank_corr.hpp"

namespace npg {

struct ClimeSettings {
    double lambda = 0.0;
    bool adaptive = false;
    // Pilot lambda for the plain CLIME pass that builds the adaptive weights;
    // required iff adaptive.
    std::optional<double> lambda_pilot;
    // Optional entrywise hard threshold tau, applied to off-diagonals only,
    // after symmetrization. Off by default.
    std::optional<double> hard_threshold;
    // Sample size behind the correlation estimate; the adaptive weights use
    // (|theta| + 1/n)^{-1}. Required iff adaptive.
    int n = 0;
    // The weights follow the pilot estimate before symmetrization (the
    // literal Eq-(17) choice). Set to true to build them from the
    // symmetrized pilot instead.
    bool weights_from_symmetrized_pilot = false;
};

// One column subproblem:
//   min || w o theta ||_1  s.t.  | r theta - e_k | <= lambda * w   (entrywise),
// with w == 1 when no weights are given. lambda == 0 requires invertible r.
std::vector<double> clime_column(const SymMatrix& r, int k, double lambda,
                                 const std::vector<double>* weights = nullptr);

// Full estimate: p independent column solves (run in parallel), assembled and
// then symmetrized by the entrywise min-magnitude rule. In adaptive mode a
// plain pilot solve at lambda_pilot builds the weight matrix
// W = (|Theta_pilot| + 1/n)^{-1}, and the final columns solve the weighted
// subproblems at lambda. The hard threshold, if set, is applied last.
PrecisionEstimate clime_solve(const SymMatrix& r, const ClimeSettings& settings);
PrecisionEstimate clime_solve_serial(const SymMatrix& r, const ClimeSettings& settings);

inline PrecisionEstimate clime_solve(const RankCorrEstimate& r, ClimeSettings settings) {
    settings.n = r.n;
    return clime_solve(r.r_adjusted, settings);
}

// theta_ij with the smaller magnitude of {theta_ij, theta_ji} wins; an exact
// tie keeps theta_ij (reading order i < j).
SymMatrix symmetrize_min_magnitude(const Matrix& theta_hat);

// Zeroes off-diagonal entries with |theta_ij| < tau; diagonals are kept.
SymMatrix hard_threshold_offdiag(const SymMatrix& theta, double tau);

}  // namespace npg
