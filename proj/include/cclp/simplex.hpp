#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cclp/common.hpp"

namespace cclp {

/// Dense LP in standard form: min c'x  s.t.  A x = b, x >= 0.
struct LpProblem {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;  // row-major, rows x cols
    std::vector<double> b;
    std::vector<double> c;
    // Optional starting basis (one column index per row). Must be primal
    // feasible and nonsingular; phase 1 is skipped when given.
    std::optional<std::vector<int>> initial_basis;

    double& at(int r, int j) { return a[static_cast<std::size_t>(r) * cols + j]; }
    double get(int r, int j) const { return a[static_cast<std::size_t>(r) * cols + j]; }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpSolverReport {
    LpStatus status = LpStatus::IterationLimit;
    double objective = 0.0;
    double dual_objective = 0.0;
    long iterations = 0;
    double max_violation = 0.0;   // ||Ax - b||_inf
    double min_reduced_cost = 0.0;
};

struct LpSolution {
    std::vector<double> x;
    std::vector<double> dual;  // y = c_B B^{-1}
    LpSolverReport report;
};

namespace detail {

// Revised simplex with an explicit dense basis inverse. Dantzig pricing
// with a permanent switch to Bland's rule after a stall; ties broken by
// lowest index. Periodic refactorization keeps the inverse accurate.
class SimplexEngine {
  public:
    static constexpr double kFeasTol = 1e-9;
    static constexpr double kPivotTol = 1e-10;

    SimplexEngine(int m, int ncols) : m_(m), ncols_(ncols) {}

    std::vector<double> a;       // m x ncols (includes artificials if any)
    std::vector<double> b;       // >= 0
    std::vector<double> cost;
    std::vector<int> basis;      // size m
    std::vector<char> banned;    // columns that may never enter

    double& at(int r, int j) { return a[static_cast<std::size_t>(r) * ncols_ + j]; }

    LpStatus solve(long max_iters, long& iters_used) {
        binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
        refactorize();
        xb_.assign(static_cast<std::size_t>(m_), 0.0);
        compute_xb();
        bool bland = false;
        long stall = 0;
        double last_obj = objective();
        for (long it = 0; it < max_iters; ++it) {
            iters_used = it + 1;
            if (it > 0 && it % 200 == 0) {
                refactorize();
                compute_xb();
            }
            compute_duals();
            int enter = pick_entering(bland);
            if (enter < 0) return LpStatus::Optimal;
            std::vector<double> w(static_cast<std::size_t>(m_), 0.0);
            for (int r = 0; r < m_; ++r) {
                double s = 0.0;
                const double* row = &binv_[static_cast<std::size_t>(r) * m_];
                for (int k = 0; k < m_; ++k) s += row[k] * at(k, enter);
                w[static_cast<std::size_t>(r)] = s;
            }
            int leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int r = 0; r < m_; ++r) {
                if (w[static_cast<std::size_t>(r)] > kPivotTol) {
                    double ratio = xb_[static_cast<std::size_t>(r)] / w[static_cast<std::size_t>(r)];
                    if (ratio < best_ratio - kFeasTol ||
                        (ratio < best_ratio + kFeasTol &&
                         (leave < 0 || basis[static_cast<std::size_t>(r)] <
                                           basis[static_cast<std::size_t>(leave)]))) {
                        best_ratio = ratio;
                        leave = r;
                    }
                }
            }
            if (leave < 0) return LpStatus::Unbounded;
            pivot(enter, leave, w);
            double obj = objective();
            if (obj < last_obj - 1e-12) {
                stall = 0;
                last_obj = obj;
            } else if (++stall > 64) {
                bland = true;
            }
        }
        return LpStatus::IterationLimit;
    }

    double objective() const {
        double s = 0.0;
        for (int r = 0; r < m_; ++r)
            s += cost[static_cast<std::size_t>(basis[static_cast<std::size_t>(r)])] *
                 xb_[static_cast<std::size_t>(r)];
        return s;
    }

    const std::vector<double>& duals() const { return y_; }
    const std::vector<double>& basic_values() const { return xb_; }
    double min_reduced_cost() const { return min_reduced_; }
    double binv(int r, int k) const { return binv_[static_cast<std::size_t>(r) * m_ + k]; }

    void compute_duals() {
        y_.assign(static_cast<std::size_t>(m_), 0.0);
        for (int k = 0; k < m_; ++k) {
            double cb = cost[static_cast<std::size_t>(basis[static_cast<std::size_t>(k)])];
            if (cb == 0.0) continue;
            const double* row = &binv_[static_cast<std::size_t>(k) * m_];
            for (int r = 0; r < m_; ++r) y_[static_cast<std::size_t>(r)] += cb * row[r];
        }
    }

    void compute_xb() {
        for (int r = 0; r < m_; ++r) {
            double s = 0.0;
            const double* row = &binv_[static_cast<std::size_t>(r) * m_];
            for (int k = 0; k < m_; ++k) s += row[k] * b[static_cast<std::size_t>(k)];
            xb_[static_cast<std::size_t>(r)] = std::max(s, 0.0);
        }
    }

    // Gauss-Jordan inverse of the current basis matrix.
    void refactorize() {
        std::vector<double> mat(static_cast<std::size_t>(m_) * 2 * m_, 0.0);
        auto mat_at = [&](int r, int j) -> double& {
            return mat[static_cast<std::size_t>(r) * 2 * m_ + j];
        };
        for (int r = 0; r < m_; ++r) {
            for (int k = 0; k < m_; ++k)
                mat_at(r, k) = at(r, basis[static_cast<std::size_t>(k)]);
            mat_at(r, m_ + r) = 1.0;
        }
        for (int col = 0; col < m_; ++col) {
            int piv = -1;
            double best = 0.0;
            for (int r = col; r < m_; ++r)
                if (std::abs(mat_at(r, col)) > best) {
                    best = std::abs(mat_at(r, col));
                    piv = r;
                }
            if (piv < 0 || best < kPivotTol)
                throw ValidationError("simplex: singular basis during refactorization");
            if (piv != col)
                for (int j = 0; j < 2 * m_; ++j) std::swap(mat_at(piv, j), mat_at(col, j));
            double inv = 1.0 / mat_at(col, col);
            for (int j = 0; j < 2 * m_; ++j) mat_at(col, j) *= inv;
            for (int r = 0; r < m_; ++r) {
                if (r == col) continue;
                double f = mat_at(r, col);
                if (f == 0.0) continue;
                for (int j = 0; j < 2 * m_; ++j) mat_at(r, j) -= f * mat_at(col, j);
            }
        }
        for (int r = 0; r < m_; ++r)
            for (int k = 0; k < m_; ++k)
                binv_[static_cast<std::size_t>(r) * m_ + k] = mat_at(r, m_ + k);
    }

  private:
    int pick_entering(bool bland) {
        min_reduced_ = 0.0;
        int best = -1;
        double best_val = -kFeasTol;
        for (int j = 0; j < ncols_; ++j) {
            if (banned[static_cast<std::size_t>(j)]) continue;
            bool basic = false;
            for (int r = 0; r < m_; ++r)
                if (basis[static_cast<std::size_t>(r)] == j) {
                    basic = true;
                    break;
                }
            if (basic) continue;
            double d = cost[static_cast<std::size_t>(j)];
            for (int r = 0; r < m_; ++r) d -= y_[static_cast<std::size_t>(r)] * at(r, j);
            min_reduced_ = std::min(min_reduced_, d);
            if (d < best_val) {
                if (bland) return j;  // first (lowest index) negative
                best_val = d;
                best = j;
            }
        }
        return best;
    }

    void pivot(int enter, int leave, const std::vector<double>& w) {
        double piv = w[static_cast<std::size_t>(leave)];
        double ratio = xb_[static_cast<std::size_t>(leave)] / piv;
        for (int r = 0; r < m_; ++r) {
            if (r == leave) continue;
            xb_[static_cast<std::size_t>(r)] =
                std::max(xb_[static_cast<std::size_t>(r)] - ratio * w[static_cast<std::size_t>(r)],
                         0.0);
        }
        xb_[static_cast<std::size_t>(leave)] = ratio;
        double* lrow = &binv_[static_cast<std::size_t>(leave) * m_];
        for (int k = 0; k < m_; ++k) lrow[k] /= piv;
        for (int r = 0; r < m_; ++r) {
            if (r == leave) continue;
            double f = w[static_cast<std::size_t>(r)];
            if (f == 0.0) continue;
            double* row = &binv_[static_cast<std::size_t>(r) * m_];
            for (int k = 0; k < m_; ++k) row[k] -= f * lrow[k];
        }
        basis[static_cast<std::size_t>(leave)] = enter;
    }

    int m_, ncols_;
    std::vector<double> binv_;
    std::vector<double> xb_;
    std::vector<double> y_;
    double min_reduced_ = 0.0;
};

}  // namespace detail

/// Two-phase dense revised simplex.
inline LpSolution solve_lp(const LpProblem& prob, long max_iters = 200000) {
    int m = prob.rows, n = prob.cols;
    bool have_basis = prob.initial_basis.has_value();
    int ncols = have_basis ? n : n + m;
    detail::SimplexEngine eng(m, ncols);
    eng.a.assign(static_cast<std::size_t>(m) * ncols, 0.0);
    eng.b.resize(static_cast<std::size_t>(m));
    eng.cost.assign(static_cast<std::size_t>(ncols), 0.0);
    eng.banned.assign(static_cast<std::size_t>(ncols), 0);
    for (int r = 0; r < m; ++r) {
        double sign = prob.b[static_cast<std::size_t>(r)] < 0 ? -1.0 : 1.0;
        eng.b[static_cast<std::size_t>(r)] = sign * prob.b[static_cast<std::size_t>(r)];
        for (int j = 0; j < n; ++j) eng.at(r, j) = sign * prob.get(r, j);
    }

    long iters_total = 0;
    LpSolution sol;
    sol.report.iterations = 0;

    if (!have_basis) {
        // Phase 1: minimize the sum of artificials.
        for (int r = 0; r < m; ++r) {
            eng.at(r, n + r) = 1.0;
            eng.cost[static_cast<std::size_t>(n + r)] = 1.0;
        }
        eng.basis.resize(static_cast<std::size_t>(m));
        for (int r = 0; r < m; ++r) eng.basis[static_cast<std::size_t>(r)] = n + r;
        long it1 = 0;
        LpStatus st = eng.solve(max_iters, it1);
        iters_total += it1;
        if (st != LpStatus::Optimal || eng.objective() > 1e-7) {
            sol.report.status = st == LpStatus::Optimal ? LpStatus::Infeasible : st;
            sol.report.iterations = iters_total;
            return sol;
        }
        // Drive remaining artificials out of the basis.
        for (int r = 0; r < m; ++r) {
            if (eng.basis[static_cast<std::size_t>(r)] < n) continue;
            eng.refactorize();
            eng.compute_xb();
            // Any original column with a nonzero entry in this basis row can
            // replace the artificial via a degenerate pivot.
            bool replaced = false;
            for (int j = 0; j < n && !replaced; ++j) {
                bool basic = false;
                for (int rr = 0; rr < m; ++rr)
                    if (eng.basis[static_cast<std::size_t>(rr)] == j) basic = true;
                if (basic) continue;
                // w_r = (B^{-1} A_j)_r ; only this row is needed.
                double wrj = 0.0;
                for (int k = 0; k < m; ++k) wrj += eng.binv(r, k) * eng.at(k, j);
                if (std::abs(wrj) > 1e-7) {
                    eng.basis[static_cast<std::size_t>(r)] = j;
                    eng.refactorize();
                    eng.compute_xb();
                    replaced = true;
                }
            }
            if (!replaced) {
                // Redundant row: keep the artificial basic at zero and forbid
                // every other column from entering through it (it stays zero
                // because its cost remains prohibitive in phase 2).
                eng.cost[static_cast<std::size_t>(eng.basis[static_cast<std::size_t>(r)])] = 0.0;
            }
        }
        for (int r = 0; r < m; ++r) eng.banned[static_cast<std::size_t>(n + r)] = 1;
        for (int j = 0; j < ncols; ++j) eng.cost[static_cast<std::size_t>(j)] = 0.0;
    } else {
        eng.basis = *prob.initial_basis;
        if (static_cast<int>(eng.basis.size()) != m)
            throw ValidationError("solve_lp: initial basis has wrong size");
    }

    for (int j = 0; j < n; ++j) eng.cost[static_cast<std::size_t>(j)] = prob.c[static_cast<std::size_t>(j)];
    for (int j = n; j < ncols; ++j) eng.cost[static_cast<std::size_t>(j)] = 0.0;

    long it2 = 0;
    LpStatus st = eng.solve(max_iters, it2);
    iters_total += it2;
    sol.report.status = st;
    sol.report.iterations = iters_total;
    if (st != LpStatus::Optimal) return sol;

    sol.x.assign(static_cast<std::size_t>(n), 0.0);
    for (int r = 0; r < m; ++r) {
        int j = eng.basis[static_cast<std::size_t>(r)];
        if (j < n) sol.x[static_cast<std::size_t>(j)] = eng.basic_values()[static_cast<std::size_t>(r)];
    }
    eng.compute_duals();
    sol.dual = eng.duals();
    // Duals refer to the sign-flipped rows; undo the flips.
    for (int r = 0; r < m; ++r)
        if (prob.b[static_cast<std::size_t>(r)] < 0) sol.dual[static_cast<std::size_t>(r)] *= -1.0;

    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += prob.c[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];
    sol.report.objective = obj;
    double dual_obj = 0.0;
    for (int r = 0; r < m; ++r) dual_obj += sol.dual[static_cast<std::size_t>(r)] * prob.b[static_cast<std::size_t>(r)];
    sol.report.dual_objective = dual_obj;
    sol.report.min_reduced_cost = eng.min_reduced_cost();

    double viol = 0.0;
    for (int r = 0; r < m; ++r) {
        double s = -prob.b[static_cast<std::size_t>(r)];
        for (int j = 0; j < n; ++j) s += prob.get(r, j) * sol.x[static_cast<std::size_t>(j)];
        viol = std::max(viol, std::abs(s));
    }
    sol.report.max_violation = viol;
    return sol;
}

}  // namespace cclp
