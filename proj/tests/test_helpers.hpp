#pragma once

#include <cmath>
#include <vector>

#include "npg/linalg.hpp"
#include "npg/matrix.hpp"
#include "npg/rng.hpp"

namespace npg::test {

inline SymMatrix sym3(double a00, double a01, double a02, double a11, double a12,
                      double a22) {
    SymMatrix m(3);
    m.set(0, 0, a00);
    m.set(0, 1, a01);
    m.set(0, 2, a02);
    m.set(1, 1, a11);
    m.set(1, 2, a12);
    m.set(2, 2, a22);
    return m;
}

// The 3x3 correlation matrix with 0.7 on the first off-diagonal; its
// sine-adjusted version is the canonical indefinite example.
inline SymMatrix toy_chain07() { return sym3(1.0, 0.7, 0.0, 1.0, 0.7, 1.0); }

inline SymMatrix adjusted_toy_chain07() {
    const double a = 2.0 * std::sin(3.14159265358979323846 / 6.0 * 0.7);
    return sym3(1.0, a, 0.0, 1.0, a, 1.0);
}

// Random SPD matrix b' b + eps I with entries from the given stream.
inline SymMatrix random_spd(int p, Rng& rng, double eps = 0.5) {
    Matrix b(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) b(i, j) = 2.0 * rng.next_uniform() - 1.0;
    SymMatrix s(p);
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            double acc = 0.0;
            for (int k = 0; k < p; ++k) acc += b(k, i) * b(k, j);
            s.set(i, j, acc + (i == j ? eps : 0.0));
        }
    }
    return s;
}

// Random correlation-like symmetric matrix: unit diagonal, off-diagonals
// bounded by `scale`; indefinite for larger scales.
inline SymMatrix random_unit_diag(int p, Rng& rng, double scale) {
    SymMatrix s = SymMatrix::identity(p);
    for (int i = 0; i < p - 1; ++i)
        for (int j = i + 1; j < p; ++j)
            s.set(i, j, scale * (2.0 * rng.next_uniform() - 1.0));
    return s;
}

inline double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
    return matrix_norm(a - b, MatrixNorm::Max);
}

}  // namespace npg::test
