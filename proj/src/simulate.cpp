#include "npg/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "npg/linalg.hpp"
#include "npg/rng.hpp"

namespace npg {

namespace {

void validate_spec(const ModelSpec& spec) {
    if (spec.p < 4) throw InvalidInput("ModelSpec: p must be >= 4");
    if (spec.n < 10) throw InvalidInput("ModelSpec: n must be >= 10");
    if (spec.topology == Topology::Hub &&
        spec.hub_count * (spec.hub_degree + 1) > spec.p)
        throw InvalidInput("ModelSpec: hub_count * (hub_degree + 1) must be <= p");
    if (spec.topology == Topology::RandomErdos &&
        !(spec.erdos_prob >= 0.0 && spec.erdos_prob <= 1.0))
        throw InvalidInput("ModelSpec: erdos_prob must be in [0, 1]");
}

// Zero-diagonal adjacency-style matrix for the seeded topologies.
SymMatrix build_offdiagonal(const ModelSpec& spec) {
    const int p = spec.p;
    SymMatrix theta0(p);
    switch (spec.topology) {
        case Topology::Chain05:
            for (int i = 0; i + 1 < p; ++i) theta0.set(i, i + 1, 0.5);
            break;
        case Topology::Banded4:
            for (int i = 0; i < p; ++i) {
                if (i + 1 < p) theta0.set(i, i + 1, 0.4);
                if (i + 2 < p) theta0.set(i, i + 2, 0.2);
                if (i + 3 < p) theta0.set(i, i + 3, 0.2);
            }
            break;
        case Topology::Hub: {
            Rng rng = Rng::substream(spec.seed, 0x68756273ULL);  // "hubs"
            std::vector<int> nodes(p);
            std::iota(nodes.begin(), nodes.end(), 0);
            for (int i = p - 1; i > 0; --i)
                std::swap(nodes[i], nodes[rng.next_below(static_cast<uint64_t>(i) + 1)]);
            // First hub_count shuffled nodes are hubs; each takes the next
            // hub_degree nodes as its leaves, so hub edge sets are disjoint.
            int next = spec.hub_count;
            for (int h = 0; h < spec.hub_count; ++h)
                for (int d = 0; d < spec.hub_degree; ++d)
                    theta0.set(nodes[h], nodes[next++], 0.2);
            break;
        }
        case Topology::RandomErdos: {
            Rng rng = Rng::substream(spec.seed, 0x6572646fULL);  // "erdo"
            for (int i = 0; i < p - 1; ++i)
                for (int j = i + 1; j < p; ++j)
                    if (rng.next_uniform() <= spec.erdos_prob)
                        theta0.set(i, j, spec.erdos_value);
            break;
        }
    }
    return theta0;
}

bool needs_eigen_diagonal(Topology t) {
    return t == Topology::Hub || t == Topology::RandomErdos;
}

}  // namespace

GroundTruth build_truth(const ModelSpec& spec) {
    validate_spec(spec);
    const int p = spec.p;
    const SymMatrix theta0 = build_offdiagonal(spec);

    SymMatrix theta_raw(p);
    if (needs_eigen_diagonal(spec.topology)) {
        // Diagonal = |smallest eigenvalue of theta0| + margin; the paper's
        // margin-free rule yields a singular matrix, so a 0.05 margin is
        // added (doubled on retry).
        const std::vector<double> ev = sym_eigenvalues(theta0);
        const double lam_min = ev.back();
        double margin = 0.05;
        bool ok = false;
        for (int attempt = 0; attempt < 3 && !ok; ++attempt, margin *= 2.0) {
            const double diag = std::abs(std::min(lam_min, 0.0)) + margin;
            for (int i = 0; i < p; ++i) {
                for (int j = i; j < p; ++j)
                    theta_raw.set(i, j, i == j ? diag : theta0(i, j));
            }
            ok = is_positive_definite(theta_raw);
        }
        if (!ok) throw PositiveDefinitenessError(0);
    } else {
        for (int i = 0; i < p; ++i) {
            theta_raw.set(i, i, 1.0);
            for (int j = i + 1; j < p; ++j) theta_raw.set(i, j, theta0(i, j));
        }
        if (!is_positive_definite(theta_raw)) throw PositiveDefinitenessError(0);
    }

    // Standardize so that sigma_star is a correlation matrix. Scaling by a
    // positive diagonal cannot create or destroy zeros.
    const SymMatrix sigma_raw = inverse_spd(theta_raw);
    std::vector<double> dsqrt(p);
    for (int i = 0; i < p; ++i) dsqrt[i] = std::sqrt(sigma_raw(i, i));

    GroundTruth truth;
    truth.theta_raw = theta_raw;
    truth.sigma_star = SymMatrix(p);
    truth.theta_star = SymMatrix(p);
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            truth.sigma_star.set(i, j, sigma_raw(i, j) / (dsqrt[i] * dsqrt[j]));
            truth.theta_star.set(i, j, theta_raw(i, j) * dsqrt[i] * dsqrt[j]);
        }
        truth.sigma_star.set(i, i, 1.0);
    }

    truth.support.p = p;
    std::vector<int> degree(p, 0);
    for (int i = 0; i < p - 1; ++i) {
        for (int j = i + 1; j < p; ++j) {
            if (std::abs(theta_raw(i, j)) > 1e-12) {
                truth.support.edges.insert({i, j});
                truth.support.signs[{i, j}] = theta_raw(i, j) > 0.0 ? 1 : -1;
                ++degree[i];
                ++degree[j];
            }
        }
    }
    truth.edge_count = static_cast<int>(truth.support.edges.size());
    truth.max_degree = degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());
    return truth;
}

DataMatrix sample_gaussian(const GroundTruth& truth, int n, uint64_t seed) {
    const int p = truth.sigma_star.dim();
    const LowerTriangular l = cholesky(truth.sigma_star);
    Rng rng = Rng::substream(seed, 0x64617461ULL);  // "data"

    DataMatrix data(n, p);
    std::vector<double> z(p);
    for (int row = 0; row < n; ++row) {
        for (int j = 0; j < p; ++j) z[j] = rng.next_normal();
        for (int i = 0; i < p; ++i) {
            double acc = 0.0;
            for (int k = 0; k <= i; ++k) acc += l(i, k) * z[k];
            data(row, i) = acc;
        }
    }
    return data;
}

DataMatrix apply_nonparanormal(const DataMatrix& data) {
    DataMatrix out = data;
    for (int j = 0; j < data.p; ++j) {
        const int which = j % 5;
        for (int i = 0; i < data.n; ++i) {
            const double x = data(i, j);
            double y = x;
            switch (which) {
                case 0: y = x; break;
                case 1: y = std::exp(x); break;
                case 2: y = x * x * x; break;
                case 3: y = 1.0 / (1.0 + std::exp(-x)); break;
                case 4:
                    if (x < -1.0)
                        y = -std::exp(-(x + 1.0));
                    else if (x > 1.0)
                        y = std::exp(x - 1.0);
                    else
                        y = x;
                    break;
            }
            out(i, j) = y;
        }
    }
    return out;
}

}  // namespace npg
