#include "npg/rank_corr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "npg/parallel.hpp"

namespace npg {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

std::vector<double> ranks(std::span<const double> column) {
    const int n = static_cast<int>(column.size());
    if (n < 3) throw InvalidInput("ranks: need at least 3 values");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return column[a] < column[b]; });
    if (column[order.front()] == column[order.back()])
        throw ConstantColumnError(-1, "");

    std::vector<double> r(n);
    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && column[order[j + 1]] == column[order[i]]) ++j;
        // Tied run order[i..j] gets the midrank of positions i+1 .. j+1.
        const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (int k = i; k <= j; ++k) r[order[k]] = midrank;
        i = j + 1;
    }
    return r;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionMismatch("spearman_rho: length mismatch");
    const std::vector<double> rx = ranks(x);
    const std::vector<double> ry = ranks(y);
    // General Pearson on midranks, not the n(n^2-1)/6 shortcut, so ties are
    // handled correctly.
    return pearson(rx, ry);
}

double kendall_tau(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionMismatch("kendall_tau: length mismatch");
    const int n = static_cast<int>(x.size());
    if (n < 3) throw InvalidInput("kendall_tau: need at least 3 values");
    long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    for (int i = 0; i < n - 1; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            if (dx == 0.0 && dy == 0.0) continue;
            if (dx == 0.0) {
                ++ties_x;
            } else if (dy == 0.0) {
                ++ties_y;
            } else if ((dx > 0.0) == (dy > 0.0)) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    const double n0 = 0.5 * n * (n - 1.0);
    const double denom = std::sqrt((n0 - static_cast<double>(ties_x)) *
                                   (n0 - static_cast<double>(ties_y)));
    if (denom <= 0.0) throw ConstantColumnError(-1, "");
    double tau = static_cast<double>(concordant - discordant) / denom;
    return std::clamp(tau, -1.0, 1.0);
}

double adjust(double rho) {
    if (!(rho >= -1.0 && rho <= 1.0))
        throw DomainError("adjust: correlation " + std::to_string(rho) + " outside [-1, 1]");
    return 2.0 * std::sin(kPi / 6.0 * rho);
}

double adjust_kendall(double tau) {
    if (!(tau >= -1.0 && tau <= 1.0))
        throw DomainError("adjust_kendall: value outside [-1, 1]");
    return std::sin(kPi / 2.0 * tau);
}

namespace {

RankCorrEstimate rank_corr_impl(const DataMatrix& data, RankCorrelation method, bool parallel) {
    data.validate();
    const int n = data.n;
    const int p = data.p;

    // Rank (or keep) each column once up front.
    std::vector<std::vector<double>> cols(p);
    for (int j = 0; j < p; ++j) {
        std::vector<double> c = data.column(j);
        if (method == RankCorrelation::Spearman) {
            try {
                cols[j] = ranks(c);
            } catch (const ConstantColumnError&) {
                throw ConstantColumnError(j, data.column_name(j));
            }
        } else {
            if (*std::min_element(c.begin(), c.end()) == *std::max_element(c.begin(), c.end()))
                throw ConstantColumnError(j, data.column_name(j));
            cols[j] = std::move(c);
        }
    }

    RankCorrEstimate est;
    est.n = n;
    est.p = p;
    est.r_spearman = SymMatrix::identity(p);
    est.r_adjusted = SymMatrix::identity(p);

    const int64_t pairs = static_cast<int64_t>(p) * (p - 1) / 2;
    std::vector<double> raw(static_cast<size_t>(pairs));
    auto body = [&](int64_t t) {
        int i = 0;
        int64_t acc = 0;
        while (acc + (p - 1 - i) <= t) acc += p - 1 - i, ++i;
        const int j = i + 1 + static_cast<int>(t - acc);
        raw[static_cast<size_t>(t)] = (method == RankCorrelation::Spearman)
                                          ? pearson(cols[i], cols[j])
                                          : kendall_tau(cols[i], cols[j]);
    };
    if (parallel) {
        parallel_for(pairs, body);
    } else {
        for (int64_t t = 0; t < pairs; ++t) body(t);
    }

    int64_t t = 0;
    for (int i = 0; i < p - 1; ++i) {
        for (int j = i + 1; j < p; ++j) {
            const double rho = raw[static_cast<size_t>(t++)];
            est.r_spearman.set(i, j, rho);
            est.r_adjusted.set(i, j, method == RankCorrelation::Spearman
                                         ? adjust(rho)
                                         : adjust_kendall(rho));
        }
    }
    return est;
}

}  // namespace

RankCorrEstimate rank_correlation_matrix(const DataMatrix& data, RankCorrelation method) {
    return rank_corr_impl(data, method, true);
}

RankCorrEstimate rank_correlation_matrix_serial(const DataMatrix& data, RankCorrelation method) {
    return rank_corr_impl(data, method, false);
}

}  // namespace npg
