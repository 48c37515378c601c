#include <doctest.h>

#include <cmath>

#include "npg/linalg.hpp"
#include "test_helpers.hpp"

using namespace npg;
using namespace npg::test;

TEST_SUITE_BEGIN("linalg");

TEST_CASE("cholesky of the identity is the identity") {
    const LowerTriangular l = cholesky(SymMatrix::identity(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j <= i; ++j) CHECK(l(i, j) == (i == j ? 1.0 : 0.0));
}

TEST_CASE("cholesky 2x2 by hand expansion") {
    SymMatrix a(2);
    a.set(0, 0, 4.0);
    a.set(0, 1, 2.0);
    a.set(1, 1, 3.0);
    const LowerTriangular l = cholesky(a);
    CHECK(l(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(l(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(l(1, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(l(0, 1) == 0.0);
}

TEST_CASE("cholesky rejects indefinite input with the failing pivot") {
    SymMatrix a(2);
    a.set(0, 0, 1.0);
    a.set(0, 1, 2.0);
    a.set(1, 1, 1.0);  // eigenvalues 3, -1
    CHECK_THROWS_AS(cholesky(a), PositiveDefinitenessError);
    try {
        cholesky(a);
    } catch (const PositiveDefinitenessError& e) {
        CHECK(e.pivot_index == 1);
    }
}

TEST_CASE("inverse_spd identity and diagonal") {
    CHECK(max_abs_diff(inverse_spd(SymMatrix::identity(5)), SymMatrix::identity(5)) < 1e-14);
    SymMatrix d(2);
    d.set(0, 0, 2.0);
    d.set(1, 1, 4.0);
    const SymMatrix inv = inverse_spd(d);
    CHECK(inv(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(inv(1, 1) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(inv(0, 1) == 0.0);
}

TEST_CASE("inverse of the p=3 chain precision matches the analytic inverse") {
    const SymMatrix theta = sym3(1.0, 0.5, 0.0, 1.0, 0.5, 1.0);
    const SymMatrix sigma = inverse_spd(theta);
    const SymMatrix expected = sym3(1.5, -1.0, 0.5, 2.0, -1.0, 1.5);
    CHECK(max_abs_diff(sigma, expected) < 1e-12);
    // verified by multiplying back
    const Matrix prod = multiply(sigma.to_matrix(), theta.to_matrix());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(prod(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
}

TEST_CASE("toy eigenvalues from the indefiniteness example") {
    const std::vector<double> ev = sym_eigenvalues(toy_chain07());
    REQUIRE(ev.size() == 3);
    CHECK(std::abs(ev[0] - 1.99) < 0.005);
    CHECK(std::abs(ev[1] - 1.00) < 0.005);
    CHECK(std::abs(ev[2] - 0.01) < 0.005);

    const std::vector<double> ev2 = sym_eigenvalues(adjusted_toy_chain07());
    CHECK(std::abs(ev2[0] - 2.01) < 0.005);
    CHECK(std::abs(ev2[1] - 1.00) < 0.005);
    CHECK(std::abs(ev2[2] + 0.01) < 0.005);  // negative: the matrix is indefinite
}

TEST_CASE("eigenvalues of a diagonal matrix are its sorted diagonal") {
    SymMatrix d(3);
    d.set(0, 0, 3.0);
    d.set(1, 1, 1.0);
    d.set(2, 2, 2.0);
    const std::vector<double> ev = sym_eigenvalues(d);
    CHECK(ev[0] == doctest::Approx(3.0));
    CHECK(ev[1] == doctest::Approx(2.0));
    CHECK(ev[2] == doctest::Approx(1.0));
}

TEST_CASE("matrix norms on small fixtures") {
    CHECK(matrix_norm(SymMatrix::identity(4), MatrixNorm::Op2) == doctest::Approx(1.0));
    SymMatrix a(2);
    a.set(0, 0, 1.0);
    a.set(0, 1, -2.0);
    a.set(1, 1, 1.0);
    CHECK(matrix_norm(a, MatrixNorm::Op1) == doctest::Approx(3.0));
    Matrix g(2, 2);
    g(0, 1) = 3.0;
    g(1, 0) = 4.0;
    CHECK(matrix_norm(g, MatrixNorm::Fro) == doctest::Approx(5.0));
    CHECK(matrix_norm(g, MatrixNorm::Max) == doctest::Approx(4.0));
}

TEST_CASE("random SPD properties: inverse, similarity invariance, trace") {
    Rng rng(20240901);
    for (int trial = 0; trial < 10; ++trial) {
        const int p = 3 + static_cast<int>(rng.next_below(6));
        const SymMatrix a = random_spd(p, rng);

        // inverse_spd(a) * a == I
        const Matrix prod = multiply(inverse_spd(a).to_matrix(), a.to_matrix());
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j)
                CHECK(std::abs(prod(i, j) - (i == j ? 1.0 : 0.0)) < 1e-8);

        // trace equals the eigenvalue sum
        const std::vector<double> ev = sym_eigenvalues(a);
        double trace = 0.0, sum = 0.0;
        for (int i = 0; i < p; ++i) trace += a(i, i);
        for (double v : ev) sum += v;
        CHECK(trace == doctest::Approx(sum).epsilon(1e-8));

        // op2 <= op1 for symmetric matrices
        CHECK(matrix_norm(a, MatrixNorm::Op2) <=
              matrix_norm(a, MatrixNorm::Op1) + 1e-10);
    }
}

TEST_CASE("eigenvalues are invariant under orthogonal similarity") {
    Rng rng(77);
    const int p = 5;
    const SymMatrix a = random_spd(p, rng);
    // Random orthogonal Q from Gram-Schmidt on a random matrix.
    Matrix q(p, p);
    for (int j = 0; j < p; ++j) {
        std::vector<double> v(p);
        for (int i = 0; i < p; ++i) v[i] = 2.0 * rng.next_uniform() - 1.0;
        for (int k = 0; k < j; ++k) {
            double dot = 0.0;
            for (int i = 0; i < p; ++i) dot += v[i] * q(i, k);
            for (int i = 0; i < p; ++i) v[i] -= dot * q(i, k);
        }
        double norm = 0.0;
        for (int i = 0; i < p; ++i) norm += v[i] * v[i];
        norm = std::sqrt(norm);
        for (int i = 0; i < p; ++i) q(i, j) = v[i] / norm;
    }
    const Matrix qaq = multiply(multiply(q.transposed(), a.to_matrix()), q);
    const std::vector<double> ev1 = sym_eigenvalues(a);
    const std::vector<double> ev2 = sym_eigenvalues(SymMatrix::from_average(qaq));
    for (int i = 0; i < p; ++i) CHECK(ev1[i] == doctest::Approx(ev2[i]).epsilon(1e-8));
}

TEST_CASE("clip_to_psd floors the spectrum") {
    const SymMatrix indef = adjusted_toy_chain07();
    const SymMatrix clipped = clip_to_psd(indef, 1e-4);
    const std::vector<double> ev = sym_eigenvalues(clipped);
    CHECK(ev.back() >= 1e-4 - 1e-10);
    CHECK(is_positive_definite(clipped));
}

TEST_SUITE_END();
