#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "npg/errors.hpp"

namespace npg {

// Dense row-major matrix. Plain value type, no view machinery.
class Matrix {
   public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), values_(static_cast<size_t>(rows) * cols, fill) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return values_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return values_[static_cast<size_t>(i) * cols_ + j]; }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }

    double* row(int i) { return values_.data() + static_cast<size_t>(i) * cols_; }
    const double* row(int i) const { return values_.data() + static_cast<size_t>(i) * cols_; }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool all_finite() const {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

   private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> values_;
};

// Symmetric p x p matrix stored as a full row-major buffer with symmetric
// write-through: set(i, j) writes both triangles, so value(i, j) == value(j, i)
// holds exactly at all times.
class SymMatrix {
   public:
    SymMatrix() = default;
    explicit SymMatrix(int p, double fill = 0.0)
        : p_(p), values_(static_cast<size_t>(p) * p, fill) {}

    static SymMatrix identity(int p) {
        SymMatrix m(p);
        for (int i = 0; i < p; ++i) m.set(i, i, 1.0);
        return m;
    }

    // Requires m exactly symmetric; throws InvalidInput otherwise.
    static SymMatrix from_exact(const Matrix& m) {
        if (m.rows() != m.cols()) throw DimensionMismatch("matrix is not square");
        for (int i = 0; i < m.rows(); ++i)
            for (int j = i + 1; j < m.cols(); ++j)
                if (m(i, j) != m(j, i))
                    throw InvalidInput("matrix is not exactly symmetric");
        SymMatrix s(m.rows());
        for (int i = 0; i < m.rows(); ++i)
            for (int j = i; j < m.cols(); ++j) s.set(i, j, m(i, j));
        return s;
    }

    // (m + m^T) / 2, for results that are symmetric up to rounding.
    static SymMatrix from_average(const Matrix& m) {
        if (m.rows() != m.cols()) throw DimensionMismatch("matrix is not square");
        SymMatrix s(m.rows());
        for (int i = 0; i < m.rows(); ++i) {
            s.set(i, i, m(i, i));
            for (int j = i + 1; j < m.cols(); ++j) s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
        }
        return s;
    }

    int dim() const { return p_; }

    double operator()(int i, int j) const { return values_[static_cast<size_t>(i) * p_ + j]; }

    void set(int i, int j, double v) {
        values_[static_cast<size_t>(i) * p_ + j] = v;
        values_[static_cast<size_t>(j) * p_ + i] = v;
    }

    const double* data() const { return values_.data(); }
    const double* row(int i) const { return values_.data() + static_cast<size_t>(i) * p_; }

    Matrix to_matrix() const {
        Matrix m(p_, p_);
        for (int i = 0; i < p_; ++i)
            for (int j = 0; j < p_; ++j) m(i, j) = (*this)(i, j);
        return m;
    }

    bool all_finite() const {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
        if (a.dim() != b.dim()) throw DimensionMismatch("dimension mismatch in SymMatrix subtraction");
        SymMatrix d(a.dim());
        for (size_t k = 0; k < a.values_.size(); ++k) d.values_[k] = a.values_[k] - b.values_[k];
        return d;
    }

    bool operator==(const SymMatrix& other) const {
        return p_ == other.p_ && values_ == other.values_;
    }

   private:
    int p_ = 0;
    std::vector<double> values_;
};

}  // namespace npg
