#include "npg/data.hpp"

#include <cmath>

#include "npg/parallel.hpp"

namespace npg {

void DataMatrix::validate() const {
    if (n < 3) throw InvalidInput("data must have at least 3 rows, got " + std::to_string(n));
    if (p < 1) throw InvalidInput("data must have at least 1 column");
    for (size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k])) {
            const int i = static_cast<int>(k) / p;
            const int j = static_cast<int>(k) % p;
            throw InvalidInput("non-finite value at row " + std::to_string(i + 1) +
                               ", column " + std::to_string(j + 1));
        }
    }
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionMismatch("pearson: length mismatch");
    const size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0)
        throw InvalidInput("pearson: zero-variance input");
    double r = sxy / std::sqrt(sxx * syy);
    if (r > 1.0) r = 1.0;
    if (r < -1.0) r = -1.0;
    return r;
}

SymMatrix pearson_correlation_matrix(const DataMatrix& data) {
    data.validate();
    const int p = data.p;
    std::vector<std::vector<double>> cols(p);
    for (int j = 0; j < p; ++j) cols[j] = data.column(j);

    SymMatrix r = SymMatrix::identity(p);
    const int64_t pairs = static_cast<int64_t>(p) * (p - 1) / 2;
    std::vector<double> buf(static_cast<size_t>(pairs));
    parallel_for(pairs, [&](int64_t t) {
        // Unrank the pair index: t -> (i, j), i < j.
        int i = 0;
        int64_t acc = 0;
        while (acc + (p - 1 - i) <= t) acc += p - 1 - i, ++i;
        const int j = i + 1 + static_cast<int>(t - acc);
        buf[static_cast<size_t>(t)] = pearson(cols[i], cols[j]);
    });
    int64_t t = 0;
    for (int i = 0; i < p - 1; ++i)
        for (int j = i + 1; j < p; ++j) r.set(i, j, buf[static_cast<size_t>(t++)]);
    return r;
}

}  // namespace npg
