#pragma once

#include <span>
#include <vector>

#include "npg/matrix.hpp"

namespace npg {

// Lower-triangular Cholesky factor, L * L^T = A.
struct LowerTriangular {
    int p = 0;
    std::vector<double> values;  // row-major p x p, upper part zero

    double operator()(int i, int j) const { return values[static_cast<size_t>(i) * p + j]; }
};

// Throws PositiveDefinitenessError (with failing pivot index) if a is not PD.
LowerTriangular cholesky(const SymMatrix& a);

// Inverse of a symmetric positive definite matrix, via Cholesky.
SymMatrix inverse_spd(const SymMatrix& a);

// Solves a x = b for SPD a.
std::vector<double> solve_spd(const SymMatrix& a, std::span<const double> b);

// Eigenvalues of a symmetric matrix, sorted descending. Cyclic Jacobi
// rotations, off-diagonal sweep threshold 1e-10 * max|a_ij|, at most 100
// sweeps.
std::vector<double> sym_eigenvalues(const SymMatrix& a);

struct EigenDecomposition {
    std::vector<double> values;  // descending
    Matrix vectors;              // column k is the eigenvector of values[k]
};
EigenDecomposition sym_eigen(const SymMatrix& a);

enum class MatrixNorm { Max, Fro, Op1, Op2 };

double matrix_norm(const SymMatrix& a, MatrixNorm which);
double matrix_norm(const Matrix& a, MatrixNorm which);

bool is_positive_definite(const SymMatrix& a);

// 2 * sum(log diag(L)); throws if a is not PD.
double log_det_spd(const SymMatrix& a);

// Eigenvalue clipping: replaces eigenvalues below `floor` with `floor`.
// Provided as an opt-in utility; no estimator applies it by default.
SymMatrix clip_to_psd(const SymMatrix& a, double floor);

// c = a * b for dense matrices (plain triple loop; fine at p <= 500).
Matrix multiply(const Matrix& a, const Matrix& b);

}  // namespace npg
