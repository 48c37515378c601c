#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "npg/glasso.hpp"
#include "npg/matrix.hpp"
#include "npg/rank_corr.hpp"

namespace npg {

// Per-node regression fit from the Dantzig-selector family. beta is indexed
// over the p-1 columns j != node, in increasing j order; support holds
// global column indices.
struct NeighborhoodFit {
    int node = -1;
    std::vector<double> beta;
    std::vector<int> support;
    double lambda = 0.0;
    bool adaptive = false;
    std::vector<double> weights;  // present iff adaptive
};

// Undirected edge set over p nodes; pairs are stored (i, j) with i < j.
struct GraphSelection {
    int p = 0;
    std::set<std::pair<int, int>> edges;
    std::map<std::pair<int, int>, int> signs;  // optional, +1 / -1

    bool has_edge(int i, int j) const {
        if (i > j) std::swap(i, j);
        return edges.count({i, j}) > 0;
    }
};

enum class Aggregation { Union, Intersection };

// LP-vertex coefficients below this magnitude are snapped to exactly zero
// before support extraction.
constexpr double kSupportZeroTol = 1e-8;

// Neighborhood Dantzig selector for one node:
//   min ||beta||_1  s.t.  || s_(k) beta - s_{(k),k} ||_inf <= lambda,
// where s_(k) drops row/column k. lambda == 0 requires the submatrix to be
// invertible (SingularSubmatrix otherwise); non-Optimal LP ends throw
// LpFailure.
NeighborhoodFit nds_fit(const SymMatrix& s, int node, double lambda);
inline NeighborhoodFit nds_fit(const RankCorrEstimate& r, int node, double lambda) {
    return nds_fit(r.r_adjusted, node, lambda);
}

// Adaptive variant: a pilot nds_fit at lambda_pilot builds weights
// w = (|beta_pilot| + 1/n)^{-1}; the final solve minimizes ||w o beta||_1
// subject to |s_(k) beta - s_{(k),k}| <= lambda_adaptive * w entrywise.
NeighborhoodFit nads_fit(const SymMatrix& s, int node, double lambda_pilot,
                         double lambda_adaptive, int n);
inline NeighborhoodFit nads_fit(const RankCorrEstimate& r, int node, double lambda_pilot,
                                double lambda_adaptive) {
    return nads_fit(r.r_adjusted, node, lambda_pilot, lambda_adaptive, r.n);
}

// Weighted solve with externally supplied weights (used when the pilot fits
// are shared across nodes, e.g. inside cross-validation).
NeighborhoodFit nads_fit_with_weights(const SymMatrix& s, int node,
                                      const std::vector<double>& weights,
                                      double lambda_adaptive);

// All p node fits; the parallel version distributes nodes across threads and
// is bitwise identical to the serial reference.
std::vector<NeighborhoodFit> nds_fit_all(const SymMatrix& s, double lambda);
std::vector<NeighborhoodFit> nds_fit_all_serial(const SymMatrix& s, double lambda);
std::vector<NeighborhoodFit> nads_fit_all(const SymMatrix& s, double lambda_pilot,
                                          double lambda_adaptive, int n);

// Neighborhood lasso (the MB baseline), for covariance/correlation input from
// oracle Gaussian data paths only:
//   min beta' s_(k) beta - 2 beta' s_{(k),k} + lambda ||beta||_1,
// solved with the same coordinate-descent kernel as the glasso subproblems.
NeighborhoodFit mb_fit(const SymMatrix& s, int node, double lambda);
std::vector<NeighborhoodFit> mb_fit_all(const SymMatrix& s, double lambda);

// Precision reconstruction from all p fits:
//   theta_kk  = (beta' s_(k) beta - 2 beta' s_{(k),k} + 1)^{-1}
//   theta_(k) = -theta_kk * beta.
// The result is generally asymmetric. Throws NonpositiveResidual if the
// quadratic form is <= 1e-10 at some node.
Matrix reconstruct_precision(const std::vector<NeighborhoodFit>& fits, const SymMatrix& s);

// Exact l1-operator-norm symmetrization:
//   min_{Theta = Theta'} || Theta - theta_hat ||_{l1}
// (matrix l1 norm = max absolute column sum), solved as an LP with epigraph
// variables: 2 p^2 absolute-value rows and p column-sum rows against t.
// The result always achieves an objective <= that of the entrywise average
// (theta_hat + theta_hat') / 2, which is verified internally.
SymMatrix symmetrize_l1(const Matrix& theta_hat);

// Policy wrapper: exact LP up to `exact_limit` (default 60), entrywise
// min-magnitude rule above it (with a one-line note to stderr).
SymMatrix symmetrize_l1_or_fallback(const Matrix& theta_hat, int exact_limit = 60);

// Support aggregation across node fits.
GraphSelection aggregate(const std::vector<NeighborhoodFit>& fits, Aggregation mode, int p);

}  // namespace npg
