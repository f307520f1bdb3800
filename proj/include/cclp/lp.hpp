#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cclp/instance.hpp"
#include "cclp/simplex.hpp"

namespace cclp {

/// Solution of the exponential-column cluster relaxation. z is sparse over
/// cluster bitmasks; x and the y statistics are derived sums over its support.
struct ClusterLpSolution {
    int n = 0;
    std::vector<std::pair<std::uint64_t, double>> z;  // (mask, z_S > 0), sorted by mask
    FractionalAssignment x;
    double lp_value = 0.0;
    LpSolverReport report;

    /// Total z-mass on clusters containing all vertices of `mask`.
    double y(std::uint64_t mask) const {
        double s = 0.0;
        for (const auto& [m, v] : z)
            if ((m & mask) == mask) s += v;
        return s;
    }

    double y_pair(int u, int v) const {
        if (u == v) return 1.0;
        return y((1ull << u) | (1ull << v));
    }

    double y_triple(int u, int v, int w) const {
        return y((1ull << u) | (1ull << v) | (1ull << w));
    }
};

struct PairwiseLpSolution {
    int n = 0;
    FractionalAssignment x;
    double lp_value = 0.0;
    LpSolverReport report;
};

struct TripleStats {
    double y_uv, y_uw, y_vw;   // pairwise co-clustering mass
    double y_uvw;              // all three together
    double y_uv_w, y_uw_v, y_vw_u;  // exactly-two splits, e.g. y_uv - y_uvw
    double y_u_v_w;            // all separated
};

inline TripleStats derive_triple_stats(const ClusterLpSolution& sol, int u, int v, int w) {
    TripleStats t{};
    t.y_uv = sol.y_pair(u, v);
    t.y_uw = sol.y_pair(u, w);
    t.y_vw = sol.y_pair(v, w);
    t.y_uvw = sol.y_triple(u, v, w);
    t.y_uv_w = t.y_uv - t.y_uvw;
    t.y_uw_v = t.y_uw - t.y_uvw;
    t.y_vw_u = t.y_vw - t.y_uvw;
    t.y_u_v_w = 1.0 - t.y_uv_w - t.y_uw_v - t.y_vw_u - t.y_uvw;
    return t;
}

/// Minimize obj(x) over all distributions of cluster mass. Exact: one column
/// per nonempty S, so capped at max_n vertices.
inline ClusterLpSolution solve_cluster_lp_exact(const Instance& inst, int max_n = 12) {
    int n = inst.n();
    if (n > max_n)
        throw CapacityError("solve_cluster_lp_exact: n=" + std::to_string(n) +
                            " exceeds max_n=" + std::to_string(max_n) + " (" +
                            std::to_string((1u << n) - 1) + " columns)");
    int ncols = (1 << n) - 1;
    LpProblem prob;
    prob.rows = n;
    prob.cols = ncols;
    prob.a.assign(static_cast<std::size_t>(n) * ncols, 0.0);
    prob.b.assign(static_cast<std::size_t>(n), 1.0);
    prob.c.assign(static_cast<std::size_t>(ncols), 0.0);
    // Column for mask S: covers each u in S once; the objective coefficient
    // is (-edges inside S) - (+edges inside S), so that total cost is
    // |E+| + c'z.
    for (int mask = 1; mask <= ncols; ++mask) {
        int j = mask - 1;
        double coeff = 0.0;
        for (int u = 0; u < n; ++u) {
            if (!(mask >> u & 1)) continue;
            prob.at(u, j) = 1.0;
            for (int v = u + 1; v < n; ++v)
                if (mask >> v & 1) coeff += inst.is_plus(u, v) ? -1.0 : 1.0;
        }
        prob.c[static_cast<std::size_t>(j)] = coeff;
    }
    // Singleton clusters form a feasible identity basis; no phase 1 needed.
    std::vector<int> basis(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) basis[static_cast<std::size_t>(u)] = (1 << u) - 1;
    prob.initial_basis = basis;

    LpSolution lp = solve_lp(prob);
    if (lp.report.status != LpStatus::Optimal)
        throw ValidationError("solve_cluster_lp_exact: solver did not converge (max violation " +
                              std::to_string(lp.report.max_violation) + ")");

    ClusterLpSolution sol;
    sol.n = n;
    sol.report = lp.report;
    for (int j = 0; j < ncols; ++j)
        if (lp.x[static_cast<std::size_t>(j)] > 1e-9)
            sol.z.emplace_back(static_cast<std::uint64_t>(j + 1), lp.x[static_cast<std::size_t>(j)]);
    sol.x = FractionalAssignment(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            sol.x.set(u, v, std::clamp(1.0 - sol.y_pair(u, v), 0.0, 1.0));
    sol.lp_value = static_cast<double>(inst.plus_count()) + lp.report.objective;
    return sol;
}

/// Classic relaxation: x in [0,1] per pair with all triangle inequalities.
inline PairwiseLpSolution solve_pairwise_lp(const Instance& inst) {
    int n = inst.n();
    int npairs = n * (n - 1) / 2;
    std::vector<int> pair_idx(static_cast<std::size_t>(n) * n, -1);
    int idx = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            pair_idx[static_cast<std::size_t>(u) * n + v] = idx;
            pair_idx[static_cast<std::size_t>(v) * n + u] = idx;
            ++idx;
        }
    int ntri = n >= 3 ? n * (n - 1) * (n - 2) / 6 * 3 : 0;
    int rows = ntri + npairs;
    int cols = npairs + ntri + npairs;  // x, triangle surpluses, upper-bound slacks
    LpProblem prob;
    prob.rows = rows;
    prob.cols = cols;
    prob.a.assign(static_cast<std::size_t>(rows) * cols, 0.0);
    prob.b.assign(static_cast<std::size_t>(rows), 0.0);
    prob.c.assign(static_cast<std::size_t>(cols), 0.0);

    std::vector<int> basis;
    basis.reserve(static_cast<std::size_t>(rows));
    // x_uv <= x_uw + x_wv  becomes  -x_uv + x_uw + x_wv - s = 0, s >= 0;
    // three rotations per unordered triple.
    int r = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c) {
                int tri[3][3] = {{a, b, c}, {a, c, b}, {b, c, a}};  // (i,j | mid k)
                for (auto& t : tri) {
                    int i = t[0], j = t[1], k = t[2];
                    prob.at(r, pair_idx[static_cast<std::size_t>(i) * n + j]) = -1.0;
                    prob.at(r, pair_idx[static_cast<std::size_t>(i) * n + k]) += 1.0;
                    prob.at(r, pair_idx[static_cast<std::size_t>(k) * n + j]) += 1.0;
                    prob.at(r, npairs + r) = -1.0;
                    prob.b[static_cast<std::size_t>(r)] = 0.0;
                    basis.push_back(npairs + r);
                    ++r;
                }
            }
    // x_uv + slack = 1.
    for (int p = 0; p < npairs; ++p) {
        prob.at(r, p) = 1.0;
        prob.at(r, npairs + ntri + p) = 1.0;
        prob.b[static_cast<std::size_t>(r)] = 1.0;
        basis.push_back(npairs + ntri + p);
        ++r;
    }
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            int p = pair_idx[static_cast<std::size_t>(u) * n + v];
            prob.c[static_cast<std::size_t>(p)] = inst.is_plus(u, v) ? 1.0 : -1.0;
        }
    prob.initial_basis = basis;

    LpSolution lp = solve_lp(prob);
    if (lp.report.status != LpStatus::Optimal)
        throw ValidationError("solve_pairwise_lp: solver did not converge");

    PairwiseLpSolution sol;
    sol.n = n;
    sol.report = lp.report;
    sol.x = FractionalAssignment(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            sol.x.set(u, v,
                      std::clamp(lp.x[static_cast<std::size_t>(
                                     pair_idx[static_cast<std::size_t>(u) * n + v])],
                                 0.0, 1.0));
    sol.lp_value = static_cast<double>(inst.minus_count()) + lp.report.objective;
    return sol;
}

/// Smallest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
inline double symmetric_min_eigenvalue(std::vector<double> m, int n) {
    if (n == 0) return 0.0;
    auto at = [&](int i, int j) -> double& { return m[static_cast<std::size_t>(i) * n + j]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-24) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                double apq = at(p, q);
                if (std::abs(apq) < 1e-15) continue;
                double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
    }
    double min_eig = at(0, 0);
    for (int i = 1; i < n; ++i) min_eig = std::min(min_eig, at(i, i));
    return min_eig;
}

/// Min eigenvalue of COV_u(v,w) = y_uvw - y_uv*y_uw over v,w != u.
inline double check_covariance_psd(const ClusterLpSolution& sol, int u) {
    int n = sol.n;
    std::vector<int> others;
    for (int v = 0; v < n; ++v)
        if (v != u) others.push_back(v);
    int m = static_cast<int>(others.size());
    std::vector<double> cov(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            int v = others[static_cast<std::size_t>(i)], w = others[static_cast<std::size_t>(j)];
            double val = (i == j ? sol.y_pair(u, v) : sol.y_triple(u, v, w)) -
                         sol.y_pair(u, v) * sol.y_pair(u, w);
            cov[static_cast<std::size_t>(i) * m + j] = val;
            cov[static_cast<std::size_t>(j) * m + i] = val;
        }
    return symmetric_min_eigenvalue(std::move(cov), m);
}

/// Min eigenvalue of the co-clustering Gram matrix (1 - x_uv), diagonal 1.
inline double check_gram_psd(const ClusterLpSolution& sol) {
    int n = sol.n;
    std::vector<double> g(static_cast<std::size_t>(n) * n, 0.0);
    for (int u = 0; u < n; ++u) {
        g[static_cast<std::size_t>(u) * n + u] = 1.0;
        for (int v = u + 1; v < n; ++v) {
            double val = 1.0 - sol.x.x(u, v);
            g[static_cast<std::size_t>(u) * n + v] = val;
            g[static_cast<std::size_t>(v) * n + u] = val;
        }
    }
    return symmetric_min_eigenvalue(std::move(g), n);
}

}  // namespace cclp
