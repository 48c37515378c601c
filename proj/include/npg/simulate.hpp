#pragma once

#include <cstdint>

#include "npg/data.hpp"
#include "npg/matrix.hpp"
#include "npg/neighborhood.hpp"

namespace npg {

enum class Topology {
    Chain05,      // theta_ii = 1, theta_{i,i+1} = 0.5
    Banded4,      // theta_ii = 1, theta_{i,i+1} = 0.4, theta_{i,i+2} = theta_{i,i+3} = 0.2
    Hub,          // hub nodes linked to disjoint sets of non-hub nodes, value 0.2
    RandomErdos,  // iid off-diagonals, value erdos_value with prob erdos_prob
};

struct ModelSpec {
    Topology topology = Topology::Chain05;
    int p = 0;
    int n = 0;
    bool nonparanormal = false;
    uint64_t seed = 0;
    int hub_count = 16;
    int hub_degree = 5;
    double erdos_prob = 0.01;
    double erdos_value = 0.2;
};

struct GroundTruth {
    // Standardized truth: sigma_star is the correlation matrix (unit
    // diagonal), theta_star its exact inverse. theta_raw is the
    // pre-standardization precision matrix; the zero pattern is identical.
    SymMatrix theta_star;
    SymMatrix sigma_star;
    SymMatrix theta_raw;
    GraphSelection support;
    int max_degree = 0;
    int edge_count = 0;
};

// Builds the raw precision matrix for the topology, verifies positive
// definiteness (Hub/RandomErdos diagonals get |lambda_min| plus a margin of
// 0.05, doubled up to 3 attempts), and standardizes:
//   sigma_raw = theta_raw^{-1},  d = diag(sigma_raw),
//   sigma_star = d^{-1/2} sigma_raw d^{-1/2},  theta_star = d^{1/2} theta_raw d^{1/2}.
GroundTruth build_truth(const ModelSpec& spec);

// n iid rows from N(0, sigma_star) via the Cholesky factor; the stream is
// xoshiro256++ seeded from `seed`, so identical seeds give identical bytes.
DataMatrix sample_gaussian(const GroundTruth& truth, int n, uint64_t seed);

// Applies the strictly increasing marginal maps g_{j mod 5} per column:
//   g0 = identity, g1 = exp, g2 = x^3, g3 = logistic e^x / (1 + e^x),
//   g4 = piecewise (-e^{-(x+1)} for x < -1, x for |x| <= 1, e^{x-1} for x > 1).
DataMatrix apply_nonparanormal(const DataMatrix& data);

}  // namespace npg
