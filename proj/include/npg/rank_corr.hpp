#pragma once

#include <span>
#include <vector>

#include "npg/data.hpp"
#include "npg/matrix.hpp"

namespace npg {

// Adjusted Spearman correlation estimate of the latent Gaussian correlation
// matrix, with the raw Spearman matrix kept for provenance.
struct RankCorrEstimate {
    SymMatrix r_spearman;  // raw Spearman rho, unit diagonal
    SymMatrix r_adjusted;  // 2 sin(pi/6 * rho), unit diagonal; may be indefinite
    int n = 0;
    int p = 0;
};

enum class RankCorrelation {
    Spearman,
    // Optional extension: Kendall's tau with the sin(pi/2 * tau) adjustment.
    // Not used by any default path.
    KendallTau,
};

// Midranks in 1..n; ties get the average of the ranks they span.
// Throws ConstantColumnError if all values are equal.
std::vector<double> ranks(std::span<const double> column);

// Pearson correlation of the two midrank vectors, clamped to [-1, 1].
double spearman_rho(std::span<const double> x, std::span<const double> y);

// Kendall's tau-b for the optional extension path.
double kendall_tau(std::span<const double> x, std::span<const double> y);

// 2 sin(pi/6 * rho). Throws DomainError outside [-1, 1].
double adjust(double rho);

// sin(pi/2 * tau), the analogous adjustment for Kendall's tau.
double adjust_kendall(double tau);

// Pairwise rank correlations over all columns, entrywise adjustment, unit
// diagonal. The adjusted matrix is returned as-is: it may be indefinite and
// no correction is applied. Column pairs are evaluated in parallel; each pair
// writes its own entry, so the result is identical to the serial reference.
RankCorrEstimate rank_correlation_matrix(const DataMatrix& data,
                                         RankCorrelation method = RankCorrelation::Spearman);

// Serial reference implementation, kept for tests and the benchmark.
RankCorrEstimate rank_correlation_matrix_serial(const DataMatrix& data,
                                                RankCorrelation method = RankCorrelation::Spearman);

}  // namespace npg
