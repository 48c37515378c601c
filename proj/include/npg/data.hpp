#pragma once

#include <span>
#include <string>
#include <vector>

#include "npg/matrix.hpp"

namespace npg {

// n observations of p variables, row-major. Column names are optional
// (empty, or one per column).
struct DataMatrix {
    int n = 0;
    int p = 0;
    std::vector<double> values;  // n * p
    std::vector<std::string> column_names;

    DataMatrix() = default;
    DataMatrix(int n_, int p_) : n(n_), p(p_), values(static_cast<size_t>(n_) * p_, 0.0) {}

    double operator()(int i, int j) const { return values[static_cast<size_t>(i) * p + j]; }
    double& operator()(int i, int j) { return values[static_cast<size_t>(i) * p + j]; }

    std::string column_name(int j) const {
        if (j >= 0 && j < static_cast<int>(column_names.size())) return column_names[j];
        return {};
    }

    // n >= 3 and every entry finite. Constant columns are rejected by the
    // rank-correlation entry points, which can name the offending column.
    void validate() const;

    std::vector<double> column(int j) const {
        std::vector<double> c(n);
        for (int i = 0; i < n; ++i) c[i] = (*this)(i, j);
        return c;
    }
};

// Pearson correlation of two equal-length vectors.
double pearson(std::span<const double> x, std::span<const double> y);

// Sample Pearson correlation matrix (unit diagonal). Used by the
// non-rank-based estimators.
SymMatrix pearson_correlation_matrix(const DataMatrix& data);

}  // namespace npg
