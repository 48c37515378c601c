#include "npg/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace npg {

LowerTriangular cholesky(const SymMatrix& a) {
    const int p = a.dim();
    LowerTriangular l;
    l.p = p;
    l.values.assign(static_cast<size_t>(p) * p, 0.0);
    auto at = [&](int i, int j) -> double& { return l.values[static_cast<size_t>(i) * p + j]; };
    for (int j = 0; j < p; ++j) {
        double d = a(j, j);
        for (int k = 0; k < j; ++k) d -= at(j, k) * at(j, k);
        if (!(d > 0.0) || !std::isfinite(d)) throw PositiveDefinitenessError(j);
        const double root = std::sqrt(d);
        at(j, j) = root;
        for (int i = j + 1; i < p; ++i) {
            double s = a(i, j);
            for (int k = 0; k < j; ++k) s -= at(i, k) * at(j, k);
            at(i, j) = s / root;
        }
    }
    return l;
}

namespace {

// Solves L y = b then L^T x = y.
std::vector<double> cholesky_solve(const LowerTriangular& l, std::span<const double> b) {
    const int p = l.p;
    std::vector<double> x(b.begin(), b.end());
    for (int i = 0; i < p; ++i) {
        double s = x[i];
        for (int k = 0; k < i; ++k) s -= l(i, k) * x[k];
        x[i] = s / l(i, i);
    }
    for (int i = p - 1; i >= 0; --i) {
        double s = x[i];
        for (int k = i + 1; k < p; ++k) s -= l(k, i) * x[k];
        x[i] = s / l(i, i);
    }
    return x;
}

}  // namespace

std::vector<double> solve_spd(const SymMatrix& a, std::span<const double> b) {
    if (static_cast<int>(b.size()) != a.dim())
        throw DimensionMismatch("solve_spd: right-hand side size mismatch");
    return cholesky_solve(cholesky(a), b);
}

SymMatrix inverse_spd(const SymMatrix& a) {
    const int p = a.dim();
    const LowerTriangular l = cholesky(a);
    Matrix inv(p, p);
    std::vector<double> e(p, 0.0);
    for (int j = 0; j < p; ++j) {
        e[j] = 1.0;
        std::vector<double> col = cholesky_solve(l, e);
        for (int i = 0; i < p; ++i) inv(i, j) = col[i];
        e[j] = 0.0;
    }
    return SymMatrix::from_average(inv);
}

namespace {

constexpr double kJacobiTol = 1e-10;
constexpr int kJacobiMaxSweeps = 100;

// Cyclic Jacobi; rotates away off-diagonal entries until all are below
// tol * max|a_ij| of the input. Optionally accumulates eigenvectors.
void jacobi(const SymMatrix& input, std::vector<double>& eigenvalues, Matrix* vectors) {
    const int p = input.dim();
    Matrix a = input.to_matrix();
    if (vectors) *vectors = Matrix::identity(p);

    double scale = 0.0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) scale = std::max(scale, std::abs(a(i, j)));
    const double threshold = (scale > 0.0) ? kJacobiTol * scale : 0.0;

    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        double max_off = 0.0;
        for (int i = 0; i < p - 1; ++i)
            for (int j = i + 1; j < p; ++j) max_off = std::max(max_off, std::abs(a(i, j)));
        if (max_off <= threshold) break;

        for (int i = 0; i < p - 1; ++i) {
            for (int j = i + 1; j < p; ++j) {
                const double apq = a(i, j);
                if (std::abs(apq) <= threshold) continue;
                const double app = a(i, i);
                const double aqq = a(j, j);
                const double tau = (aqq - app) / (2.0 * apq);
                double t;
                if (tau >= 0.0)
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (int k = 0; k < p; ++k) {
                    const double aki = a(k, i);
                    const double akj = a(k, j);
                    a(k, i) = c * aki - s * akj;
                    a(k, j) = s * aki + c * akj;
                }
                for (int k = 0; k < p; ++k) {
                    const double aik = a(i, k);
                    const double ajk = a(j, k);
                    a(i, k) = c * aik - s * ajk;
                    a(j, k) = s * aik + c * ajk;
                }
                if (vectors) {
                    for (int k = 0; k < p; ++k) {
                        const double vki = (*vectors)(k, i);
                        const double vkj = (*vectors)(k, j);
                        (*vectors)(k, i) = c * vki - s * vkj;
                        (*vectors)(k, j) = s * vki + c * vkj;
                    }
                }
            }
        }
    }

    eigenvalues.resize(p);
    for (int i = 0; i < p; ++i) eigenvalues[i] = a(i, i);
}

}  // namespace

std::vector<double> sym_eigenvalues(const SymMatrix& a) {
    std::vector<double> v;
    jacobi(a, v, nullptr);
    std::sort(v.begin(), v.end(), std::greater<double>());
    return v;
}

EigenDecomposition sym_eigen(const SymMatrix& a) {
    EigenDecomposition d;
    Matrix vecs;
    jacobi(a, d.values, &vecs);
    const int p = a.dim();
    std::vector<int> order(p);
    for (int i = 0; i < p; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return d.values[x] > d.values[y]; });
    std::vector<double> sorted(p);
    d.vectors = Matrix(p, p);
    for (int k = 0; k < p; ++k) {
        sorted[k] = d.values[order[k]];
        for (int i = 0; i < p; ++i) d.vectors(i, k) = vecs(i, order[k]);
    }
    d.values = std::move(sorted);
    return d;
}

namespace {

double norm_impl(int rows, int cols, auto&& at, MatrixNorm which,
                 const SymMatrix* symmetric_view) {
    switch (which) {
        case MatrixNorm::Max: {
            double m = 0.0;
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < cols; ++j) m = std::max(m, std::abs(at(i, j)));
            return m;
        }
        case MatrixNorm::Fro: {
            double s = 0.0;
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < cols; ++j) s += at(i, j) * at(i, j);
            return std::sqrt(s);
        }
        case MatrixNorm::Op1: {
            double m = 0.0;
            for (int j = 0; j < cols; ++j) {
                double s = 0.0;
                for (int i = 0; i < rows; ++i) s += std::abs(at(i, j));
                m = std::max(m, s);
            }
            return m;
        }
        case MatrixNorm::Op2: {
            if (symmetric_view) {
                std::vector<double> ev = sym_eigenvalues(*symmetric_view);
                if (ev.empty()) return 0.0;
                return std::max(std::abs(ev.front()), std::abs(ev.back()));
            }
            // General matrix: largest singular value via eigenvalues of a^T a.
            SymMatrix ata(cols);
            for (int i = 0; i < cols; ++i) {
                for (int j = i; j < cols; ++j) {
                    double s = 0.0;
                    for (int k = 0; k < rows; ++k) s += at(k, i) * at(k, j);
                    ata.set(i, j, s);
                }
            }
            std::vector<double> ev = sym_eigenvalues(ata);
            return ev.empty() ? 0.0 : std::sqrt(std::max(0.0, ev.front()));
        }
    }
    return 0.0;
}

}  // namespace

double matrix_norm(const SymMatrix& a, MatrixNorm which) {
    return norm_impl(a.dim(), a.dim(), [&](int i, int j) { return a(i, j); }, which, &a);
}

double matrix_norm(const Matrix& a, MatrixNorm which) {
    return norm_impl(a.rows(), a.cols(), [&](int i, int j) { return a(i, j); }, which, nullptr);
}

bool is_positive_definite(const SymMatrix& a) {
    try {
        cholesky(a);
        return true;
    } catch (const PositiveDefinitenessError&) {
        return false;
    }
}

double log_det_spd(const SymMatrix& a) {
    const LowerTriangular l = cholesky(a);
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i) s += std::log(l(i, i));
    return 2.0 * s;
}

SymMatrix clip_to_psd(const SymMatrix& a, double floor) {
    EigenDecomposition d = sym_eigen(a);
    const int p = a.dim();
    Matrix out(p, p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            double s = 0.0;
            for (int k = 0; k < p; ++k)
                s += d.vectors(i, k) * std::max(d.values[k], floor) * d.vectors(j, k);
            out(i, j) = s;
        }
    }
    return SymMatrix::from_average(out);
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("multiply: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

}  // namespace npg
