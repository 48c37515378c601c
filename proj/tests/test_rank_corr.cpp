#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "npg/rank_corr.hpp"
#include "npg/rng.hpp"
#include "npg/simulate.hpp"
#include "test_helpers.hpp"

using namespace npg;
using namespace npg::test;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Bivariate normal sampler with correlation sigma.
void sample_bivariate(Rng& rng, double sigma, int n, std::vector<double>& x,
                      std::vector<double>& y) {
    x.resize(n);
    y.resize(n);
    const double c = std::sqrt(1.0 - sigma * sigma);
    for (int i = 0; i < n; ++i) {
        const double z1 = rng.next_normal();
        const double z2 = rng.next_normal();
        x[i] = z1;
        y[i] = sigma * z1 + c * z2;
    }
}

}  // namespace

TEST_SUITE_BEGIN("rank_corr");

TEST_CASE("ranks of distinct values") {
    const std::vector<double> r = ranks(std::vector<double>{3.1, 1.0, 2.5});
    CHECK(r == std::vector<double>{3.0, 1.0, 2.0});
}

TEST_CASE("midranks on ties") {
    CHECK(ranks(std::vector<double>{5.0, 5.0, 1.0}) == std::vector<double>{2.5, 2.5, 1.0});
    CHECK(ranks(std::vector<double>{10.0, -2.0, 7.0, 7.0, 0.0}) ==
          std::vector<double>{5.0, 1.0, 3.5, 3.5, 2.0});
}

TEST_CASE("rank sum is n(n+1)/2 for random data with ties") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(rng.next_below(40));
        std::vector<double> v(n);
        for (double& x : v) x = std::floor(rng.next_uniform() * 8.0);  // many ties
        if (*std::min_element(v.begin(), v.end()) == *std::max_element(v.begin(), v.end()))
            continue;
        const std::vector<double> r = ranks(v);
        double sum = 0.0;
        for (double x : r) sum += x;
        CHECK(sum == doctest::Approx(0.5 * n * (n + 1)).epsilon(1e-12));
    }
}

TEST_CASE("constant column is rejected") {
    CHECK_THROWS_AS(ranks(std::vector<double>{2.0, 2.0, 2.0}), ConstantColumnError);
}

TEST_CASE("spearman on co-monotone pairs is 1, rank-invariant under exp") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> y{10.0, 20.0, 30.0, 40.0};
    CHECK(spearman_rho(x, y) == doctest::Approx(1.0));
    std::vector<double> ex(x.size());
    for (size_t i = 0; i < x.size(); ++i) ex[i] = std::exp(x[i]);
    CHECK(spearman_rho(x, ex) == doctest::Approx(1.0));
    std::vector<double> neg(x.size());
    for (size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
    CHECK(spearman_rho(x, neg) == doctest::Approx(-1.0));
}

TEST_CASE("spearman 3-point fixture equals Pearson on the rank vectors") {
    // ranks are [1,2,3] and [2,1,3]: Pearson = 0.5 by direct computation
    CHECK(spearman_rho(std::vector<double>{1.0, 2.0, 3.0},
                       std::vector<double>{2.0, 1.0, 3.0}) == doctest::Approx(0.5));
}

TEST_CASE("adjust: fixed points and direct evaluation") {
    CHECK(adjust(0.0) == 0.0);
    CHECK(adjust(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(adjust(-1.0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(adjust(0.7) == doctest::Approx(2.0 * std::sin(0.7 * kPi / 6.0)).epsilon(1e-15));
    CHECK(adjust(0.7) == doctest::Approx(0.7167358990906).epsilon(1e-10));
    CHECK(adjust(0.5) == -adjust(-0.5));  // odd function
    CHECK(adjust(0.9) > adjust(0.8));     // strictly increasing
    CHECK_THROWS_AS(adjust(1.5), DomainError);
    CHECK_THROWS_AS(adjust(-1.0000001), DomainError);
}

TEST_CASE("rank matrix reproducing the indefinite toy example") {
    // Three rank columns engineered so that the pairwise Spearman matrix is
    // exactly [[1, .7, 0], [.7, 1, .7], [0, .7, 1]]: with column 2 = identity,
    // sum d^2 = 36 gives rho = 0.7 and sum d^2 = 120 gives rho = 0 at n = 9.
    const double col1[] = {3, 1, 4, 5, 2, 9, 8, 7, 6};
    const double col3[] = {1, 5, 3, 4, 8, 2, 6, 7, 9};
    DataMatrix data(9, 3);
    for (int i = 0; i < 9; ++i) {
        data(i, 0) = col1[i];
        data(i, 1) = i + 1.0;
        data(i, 2) = col3[i];
    }
    const RankCorrEstimate est = rank_correlation_matrix(data);
    CHECK(est.r_spearman(0, 1) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(est.r_spearman(1, 2) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(est.r_spearman(0, 2) == doctest::Approx(0.0).epsilon(1e-12));

    const std::vector<double> ev = sym_eigenvalues(est.r_adjusted);
    CHECK(std::abs(ev[0] - 2.01) < 0.005);
    CHECK(std::abs(ev[1] - 1.00) < 0.005);
    CHECK(std::abs(ev[2] + 0.01) < 0.005);
}

TEST_CASE("monotone transforms leave the estimate bit-identical") {
    ModelSpec spec;
    spec.topology = Topology::Chain05;
    spec.p = 8;
    spec.n = 60;
    spec.seed = 11;
    const GroundTruth truth = build_truth(spec);
    const DataMatrix data = sample_gaussian(truth, spec.n, 11);
    const DataMatrix transformed = apply_nonparanormal(data);

    const RankCorrEstimate a = rank_correlation_matrix(data);
    const RankCorrEstimate b = rank_correlation_matrix(transformed);
    CHECK(std::memcmp(a.r_adjusted.data(), b.r_adjusted.data(),
                      sizeof(double) * 64) == 0);
    CHECK(std::memcmp(a.r_spearman.data(), b.r_spearman.data(),
                      sizeof(double) * 64) == 0);
}

TEST_CASE("parallel and serial paths agree bitwise") {
    ModelSpec spec;
    spec.topology = Topology::Banded4;
    spec.p = 17;
    spec.n = 40;
    spec.seed = 3;
    const DataMatrix data = sample_gaussian(build_truth(spec), spec.n, 3);
    const RankCorrEstimate a = rank_correlation_matrix(data);
    const RankCorrEstimate b = rank_correlation_matrix_serial(data);
    CHECK(std::memcmp(a.r_adjusted.data(), b.r_adjusted.data(),
                      sizeof(double) * 17 * 17) == 0);
}

TEST_CASE("entries stay in [-1, 1] with unit diagonal") {
    Rng rng(99);
    DataMatrix data(25, 6);
    for (int i = 0; i < 25; ++i)
        for (int j = 0; j < 6; ++j) data(i, j) = rng.next_normal();
    const RankCorrEstimate est = rank_correlation_matrix(data);
    for (int i = 0; i < 6; ++i) {
        CHECK(est.r_adjusted(i, i) == 1.0);
        CHECK(est.r_spearman(i, i) == 1.0);
        for (int j = 0; j < 6; ++j) {
            CHECK(est.r_adjusted(i, j) >= -1.0);
            CHECK(est.r_adjusted(i, j) <= 1.0);
        }
    }
}

TEST_CASE("estimate concentrates near the true correlation") {
    Rng rng(2024);
    std::vector<double> x, y;
    sample_bivariate(rng, 0.5, 500, x, y);
    DataMatrix data(500, 2);
    for (int i = 0; i < 500; ++i) {
        data(i, 0) = x[i];
        data(i, 1) = y[i];
    }
    const RankCorrEstimate est = rank_correlation_matrix(data);
    CHECK(std::abs(est.r_adjusted(0, 1) - 0.5) < 0.1);
}

TEST_CASE("bias law: raw Spearman biased to (6/pi) asin(sigma/2), adjusted unbiased") {
    // Monte Carlo check of the population relation at n = 200.
    const int reps = 2000, n = 200;
    for (double sigma : {0.0, 0.3, 0.7}) {
        Rng rng(static_cast<uint64_t>(1000 * sigma) + 17);
        std::vector<double> raw(reps), adj(reps);
        std::vector<double> x, y;
        for (int r = 0; r < reps; ++r) {
            sample_bivariate(rng, sigma, n, x, y);
            raw[r] = spearman_rho(x, y);
            adj[r] = adjust(raw[r]);
        }
        auto mean_se = [](const std::vector<double>& v) {
            double m = 0.0;
            for (double t : v) m += t;
            m /= v.size();
            double ss = 0.0;
            for (double t : v) ss += (t - m) * (t - m);
            return std::pair<double, double>(m, std::sqrt(ss / (v.size() - 1.0) / v.size()));
        };
        const auto [raw_mean, raw_se] = mean_se(raw);
        const auto [adj_mean, adj_se] = mean_se(adj);
        const double expected_raw = 6.0 / kPi * std::asin(sigma / 2.0);
        CHECK(std::abs(raw_mean - expected_raw) < 3.0 * std::max(raw_se, 1e-12) + 1e-9);
        CHECK(std::abs(adj_mean - sigma) < 3.0 * std::max(adj_se, 1e-12) + 1e-9);
    }
}

TEST_CASE("kendall tau variant: co-monotone, adjustment") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> y{2.0, 4.0, 8.0, 16.0};
    CHECK(kendall_tau(x, y) == doctest::Approx(1.0));
    CHECK(adjust_kendall(1.0) == doctest::Approx(1.0));
    CHECK(adjust_kendall(0.0) == 0.0);
    DataMatrix data(4, 2);
    for (int i = 0; i < 4; ++i) {
        data(i, 0) = x[i];
        data(i, 1) = -y[i];
    }
    const RankCorrEstimate est = rank_correlation_matrix(data, RankCorrelation::KendallTau);
    CHECK(est.r_adjusted(0, 1) == doctest::Approx(-1.0));
}

TEST_CASE("constant column error names the column") {
    DataMatrix data(5, 2);
    data.column_names = {"alpha", "beta"};
    for (int i = 0; i < 5; ++i) {
        data(i, 0) = i;
        data(i, 1) = 7.0;
    }
    try {
        rank_correlation_matrix(data);
        CHECK(false);
    } catch (const ConstantColumnError& e) {
        CHECK(e.column == 1);
        CHECK(std::string(e.what()).find("beta") != std::string::npos);
    }
}

TEST_SUITE_END();
