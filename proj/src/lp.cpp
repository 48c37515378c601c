#include "npg/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace npg {

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;

// Tableau layout: rows 0..m-1 are constraints, row m is the cost row holding
// reduced costs; the last column is the right-hand side. The cost-row RHS is
// minus the current objective.
class Tableau {
   public:
    Tableau(int m, int cols) : m_(m), cols_(cols), stride_(cols + 1),
                               t_(static_cast<size_t>(m + 1) * (cols + 1), 0.0),
                               basis_(m, -1) {}

    double& at(int r, int c) { return t_[static_cast<size_t>(r) * stride_ + c]; }
    double at(int r, int c) const { return t_[static_cast<size_t>(r) * stride_ + c]; }
    double* row(int r) { return t_.data() + static_cast<size_t>(r) * stride_; }

    int rows() const { return m_; }
    int cols() const { return cols_; }
    std::vector<int>& basis() { return basis_; }

    void pivot(int pr, int pc) {
        double* prow = row(pr);
        const double inv = 1.0 / prow[pc];
        for (int j = 0; j <= cols_; ++j) prow[j] *= inv;
        prow[pc] = 1.0;
        for (int r = 0; r <= m_; ++r) {
            if (r == pr) continue;
            double* rr = row(r);
            const double f = rr[pc];
            if (f == 0.0) continue;
            for (int j = 0; j <= cols_; ++j) rr[j] -= f * prow[j];
            rr[pc] = 0.0;
        }
        basis_[pr] = pc;
    }

    void drop_row(int r) {
        t_.erase(t_.begin() + static_cast<size_t>(r) * stride_,
                 t_.begin() + static_cast<size_t>(r + 1) * stride_);
        basis_.erase(basis_.begin() + r);
        --m_;
    }

    // Pivots until optimal or a limit/unboundedness stop. `enterable` bounds
    // the columns that may enter the basis. The entering rule is Dantzig
    // (most negative reduced cost, ties to the smallest index); after
    // kStallLimit pivots without objective progress it switches to Bland's
    // rule, whose anti-cycling guarantee forces progress, then switches back.
    LpStatus run(int enterable, int& pivots, int pivot_limit) {
        static constexpr int kStallLimit = 24;
        int stall = 0;
        double last_objective = -at(m_, cols_);
        for (;;) {
            int pc = -1;
            const double* cost = row(m_);
            if (stall < kStallLimit) {
                double most_negative = -kCostTol;
                for (int j = 0; j < enterable; ++j) {
                    if (cost[j] < most_negative) {
                        most_negative = cost[j];
                        pc = j;
                    }
                }
            } else {
                for (int j = 0; j < enterable; ++j) {
                    if (cost[j] < -kCostTol) {
                        pc = j;
                        break;
                    }
                }
            }
            if (pc < 0) return LpStatus::Optimal;
            if (++pivots > pivot_limit) return LpStatus::IterationLimit;

            int pr = -1;
            double best = 0.0;
            for (int i = 0; i < m_; ++i) {
                const double a = at(i, pc);
                if (a <= kPivotTol) continue;
                const double ratio = at(i, cols_) / a;
                if (pr < 0) {
                    best = ratio;
                    pr = i;
                    continue;
                }
                const double tol = 1e-12 * std::max(1.0, std::abs(best));
                if (ratio < best - tol) {
                    best = ratio;
                    pr = i;
                } else if (ratio <= best + tol && basis_[i] < basis_[pr]) {
                    pr = i;  // Bland tie-break: smallest leaving basic index
                }
            }
            if (pr < 0) return LpStatus::Unbounded;
            pivot(pr, pc);
            const double objective = -at(m_, cols_);
            if (objective < last_objective - 1e-12) {
                last_objective = objective;
                stall = 0;
            } else {
                ++stall;
            }
        }
    }

   private:
    int m_;
    int cols_;
    int stride_;
    std::vector<double> t_;
    std::vector<int> basis_;
};

}  // namespace

LpSolution solve_standard_form(const std::vector<double>& c, const Matrix& a_eq,
                               const std::vector<double>& b_eq) {
    const int m = a_eq.rows();
    const int n = a_eq.cols();
    if (static_cast<int>(c.size()) != n || static_cast<int>(b_eq.size()) != m)
        throw DimensionMismatch("solve_standard_form: inconsistent dimensions");

    // Column scaling to unit max-abs; the tableau variable is d_j * x_j.
    std::vector<double> colscale(n, 1.0);
    for (int j = 0; j < n; ++j) {
        double d = 0.0;
        for (int i = 0; i < m; ++i) d = std::max(d, std::abs(a_eq(i, j)));
        colscale[j] = (d > 0.0) ? d : 1.0;
    }

    // Scaled, sign-flipped (rhs >= 0) copy.
    Matrix a(m, n);
    std::vector<double> b(m);
    for (int i = 0; i < m; ++i) {
        const double flip = (b_eq[i] < 0.0) ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) a(i, j) = flip * a_eq(i, j) / colscale[j];
        b[i] = flip * b_eq[i];
    }

    // Crash basis: a column that is a single positive entry covers its row
    // without an artificial (slack columns in particular).
    std::vector<int> cover(m, -1);
    for (int j = 0; j < n; ++j) {
        int nz_row = -1;
        bool unit = true;
        for (int i = 0; i < m; ++i) {
            if (a(i, j) != 0.0) {
                if (nz_row >= 0) {
                    unit = false;
                    break;
                }
                nz_row = i;
            }
        }
        if (!unit || nz_row < 0 || cover[nz_row] >= 0) continue;
        if (a(nz_row, j) <= kPivotTol) continue;
        cover[nz_row] = j;
    }
    int artificial_count = 0;
    for (int i = 0; i < m; ++i)
        if (cover[i] < 0) ++artificial_count;

    const int total_cols = n + artificial_count;
    const int rhs = total_cols;
    const int pivot_limit = 50 * (m + n);

    Tableau tab(m, total_cols);
    auto& basis = tab.basis();
    int next_artificial = n;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) tab.at(i, j) = a(i, j);
        tab.at(i, rhs) = b[i];
        if (cover[i] >= 0) {
            const double v = tab.at(i, cover[i]);
            if (v != 1.0) {
                double* r = tab.row(i);
                for (int k = 0; k <= rhs; ++k) r[k] /= v;
                r[cover[i]] = 1.0;
            }
            basis[i] = cover[i];
        } else {
            tab.at(i, next_artificial) = 1.0;
            basis[i] = next_artificial++;
        }
    }

    int pivots = 0;
    LpSolution sol;

    if (artificial_count > 0) {
        // Phase 1: minimize the sum of artificials.
        double* cost = tab.row(m);
        for (int j = n; j < total_cols; ++j) cost[j] = 1.0;
        for (int i = 0; i < m; ++i) {
            if (basis[i] >= n) {
                const double* r = tab.row(i);
                double* cr = tab.row(m);
                for (int j = 0; j <= rhs; ++j) cr[j] -= r[j];
            }
        }
        const LpStatus st = tab.run(total_cols, pivots, pivot_limit);
        if (st != LpStatus::Optimal) {
            // Phase 1 is bounded below by zero, so Unbounded can only mean a
            // numerical breakdown; report it as IterationLimit.
            sol.status = LpStatus::IterationLimit;
            sol.iterations = pivots;
            return sol;
        }
        if (-tab.at(tab.rows(), rhs) > kFeasTol) {
            sol.status = LpStatus::Infeasible;
            sol.iterations = pivots;
            return sol;
        }
        // Drive leftover artificials out; a row with no structural pivot is
        // redundant and dropped.
        for (int i = tab.rows() - 1; i >= 0; --i) {
            if (tab.basis()[i] < n) continue;
            int pc = -1;
            for (int j = 0; j < n; ++j) {
                if (std::abs(tab.at(i, j)) > 1e-9) {
                    pc = j;
                    break;
                }
            }
            if (pc >= 0)
                tab.pivot(i, pc);
            else
                tab.drop_row(i);
        }
    }

    // Phase 2 with the true (scaled) costs.
    {
        const int mm = tab.rows();
        double* cost = tab.row(mm);
        for (int j = 0; j <= rhs; ++j) cost[j] = 0.0;
        for (int j = 0; j < n; ++j) cost[j] = c[j] / colscale[j];
        for (int i = 0; i < mm; ++i) {
            const int bj = tab.basis()[i];
            const double cb = cost[bj];
            if (cb != 0.0) {
                const double* r = tab.row(i);
                double* cr = tab.row(mm);
                for (int j = 0; j <= rhs; ++j) cr[j] -= cb * r[j];
                cr[bj] = 0.0;
            }
        }
        const LpStatus st = tab.run(n, pivots, pivot_limit);
        sol.status = st;
        sol.iterations = pivots;
        if (st != LpStatus::Optimal) return sol;
    }

    sol.x.assign(n, 0.0);
    for (int i = 0; i < tab.rows(); ++i) {
        const int bj = tab.basis()[i];
        if (bj < n) sol.x[bj] = tab.at(i, rhs) / colscale[bj];
    }
    sol.objective = 0.0;
    for (int j = 0; j < n; ++j) sol.objective += c[j] * sol.x[j];
    return sol;
}

LpSolution solve_l1_tube(const L1ConstrainedProblem& problem) {
    const int m = problem.a.rows();
    const int q = problem.a.cols();
    if (static_cast<int>(problem.b.size()) != m ||
        static_cast<int>(problem.tube_widths.size()) != m ||
        static_cast<int>(problem.objective_weights.size()) != q)
        throw DimensionMismatch("solve_l1_tube: inconsistent dimensions");
    for (double t : problem.tube_widths)
        if (!(t >= 0.0)) throw InvalidInput("solve_l1_tube: tube widths must be >= 0");
    for (double w : problem.objective_weights)
        if (!(w > 0.0)) throw InvalidInput("solve_l1_tube: objective weights must be > 0");

    // Fast path: the zero vector is feasible, and it is l1-minimal.
    bool zero_feasible = true;
    for (int i = 0; i < m; ++i) {
        if (std::abs(problem.b[i]) > problem.tube_widths[i]) {
            zero_feasible = false;
            break;
        }
    }
    if (zero_feasible) {
        LpSolution sol;
        sol.x.assign(q, 0.0);
        sol.objective = 0.0;
        sol.status = LpStatus::Optimal;
        return sol;
    }

    const int nvars = 2 * q + 2 * m;
    Matrix a(2 * m, nvars);
    std::vector<double> b(2 * m), c(nvars, 0.0);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < q; ++j) {
            const double v = problem.a(i, j);
            a(i, j) = v;
            a(i, q + j) = -v;
            a(m + i, j) = -v;
            a(m + i, q + j) = v;
        }
        a(i, 2 * q + i) = 1.0;          // upper-side slack
        a(m + i, 2 * q + m + i) = 1.0;  // lower-side slack
        b[i] = problem.b[i] + problem.tube_widths[i];
        b[m + i] = problem.tube_widths[i] - problem.b[i];
    }
    for (int j = 0; j < q; ++j) c[j] = c[q + j] = problem.objective_weights[j];

    LpSolution raw = solve_standard_form(c, a, b);
    LpSolution sol;
    sol.status = raw.status;
    sol.iterations = raw.iterations;
    if (raw.status != LpStatus::Optimal) return sol;

    sol.x.assign(q, 0.0);
    sol.objective = 0.0;
    for (int j = 0; j < q; ++j) {
        sol.x[j] = raw.x[j] - raw.x[q + j];
        sol.objective += problem.objective_weights[j] * std::abs(sol.x[j]);
    }
    return sol;
}

}  // namespace npg
