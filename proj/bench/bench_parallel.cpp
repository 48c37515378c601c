// Compares the OpenMP kernels against their serial reference implementations:
// pairwise rank correlation, the per-node Dantzig-selector batch, and the
// CLIME column sweep. Checks bitwise agreement, then reports timings.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include "npg/clime.hpp"
#include "npg/neighborhood.hpp"
#include "npg/parallel.hpp"
#include "npg/rank_corr.hpp"
#include "npg/simulate.hpp"

using namespace npg;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename Fn>
double time_best_of(int repeats, Fn&& fn) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

bool same_matrix(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim()) return false;
    return std::memcmp(a.data(), b.data(), sizeof(double) * a.dim() * a.dim()) == 0;
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-24s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n", name, serial,
                parallel, serial / parallel, identical ? "bitwise-identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    int p = 120, n = 400;
    if (argc > 1) p = std::stoi(argv[1]);
    if (argc > 2) n = std::stoi(argv[2]);
    std::printf("npg benchmark: p=%d n=%d threads=%d\n", p, n, max_threads());

    ModelSpec spec;
    spec.topology = Topology::Chain05;
    spec.p = p;
    spec.n = n;
    spec.seed = 42;
    const GroundTruth truth = build_truth(spec);
    const DataMatrix data = sample_gaussian(truth, n, 42);

    // Pairwise rank correlation.
    RankCorrEstimate est_par, est_ser;
    const double t_rank_ser =
        time_best_of(3, [&] { est_ser = rank_correlation_matrix_serial(data); });
    const double t_rank_par = time_best_of(3, [&] { est_par = rank_correlation_matrix(data); });
    report("rank_correlation", t_rank_ser, t_rank_par,
           same_matrix(est_ser.r_adjusted, est_par.r_adjusted));

    // Per-node Dantzig selector batch (the LP-heavy kernel).
    const double lambda = 0.2;
    std::vector<NeighborhoodFit> fits_ser, fits_par;
    const double t_nds_ser =
        time_best_of(1, [&] { fits_ser = nds_fit_all_serial(est_ser.r_adjusted, lambda); });
    const double t_nds_par =
        time_best_of(1, [&] { fits_par = nds_fit_all(est_par.r_adjusted, lambda); });
    bool nds_same = fits_ser.size() == fits_par.size();
    for (size_t k = 0; nds_same && k < fits_ser.size(); ++k)
        nds_same = fits_ser[k].beta == fits_par[k].beta;
    report("nds_fit_all", t_nds_ser, t_nds_par, nds_same);

    // CLIME column sweep.
    ClimeSettings cs;
    cs.lambda = 0.2;
    PrecisionEstimate clime_ser, clime_par;
    const double t_clime_ser =
        time_best_of(1, [&] { clime_ser = clime_solve_serial(est_ser.r_adjusted, cs); });
    const double t_clime_par =
        time_best_of(1, [&] { clime_par = clime_solve(est_par.r_adjusted, cs); });
    report("clime_solve", t_clime_ser, t_clime_par,
           same_matrix(clime_ser.theta, clime_par.theta));

    return 0;
}
