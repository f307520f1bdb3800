#pragma once

#include <numeric>
#include <optional>
#include <vector>

#include "cclp/exact.hpp"
#include "cclp/lp.hpp"

namespace cclp {

/// Correlation clustering instance on the edges of the complete base graph
/// K_base_n: two base edges are a +pair iff they share an endpoint.
struct LineGraphInstance {
    int base_n = 0;
    Instance inst;
    std::vector<std::pair<int, int>> edge_of;  // vertex -> base edge (a < b)

    int vertex(int a, int b) const {
        if (a > b) std::swap(a, b);
        // Pairs in lexicographic order: offset of row a, then b.
        return a * base_n - a * (a + 1) / 2 + (b - a - 1);
    }
};

inline LineGraphInstance build_line_graph_instance(int n) {
    if (n < 3) throw ValidationError("build_line_graph_instance: need base n >= 3");
    std::vector<std::pair<int, int>> edge_of;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) edge_of.emplace_back(a, b);
    int m = static_cast<int>(edge_of.size());
    std::vector<std::pair<int, int>> plus;
    for (int e = 0; e < m; ++e)
        for (int f = e + 1; f < m; ++f) {
            auto [a, b] = edge_of[static_cast<std::size_t>(e)];
            auto [c, d] = edge_of[static_cast<std::size_t>(f)];
            if (a == c || a == d || b == c || b == d) plus.emplace_back(e, f);
        }
    LineGraphInstance lgi{n, Instance::from_pairs(m, plus), std::move(edge_of)};
    // Sharing one endpoint with d - 1 edges at each end: +degree 2d - 2.
    for (int e = 0; e < m; ++e) {
        int deg = 0;
        for (int f = 0; f < m; ++f)
            if (f != e && lgi.inst.is_plus(e, f)) ++deg;
        if (deg != 2 * (n - 1) - 2)
            throw ValidationError("build_line_graph_instance: degree invariant broken");
    }
    return lgi;
}

/// Half-integral fractional solution: mass 1/2 on each of the n stars E_v.
/// Each base edge lies in exactly two stars, so coverage is exact. Only
/// feasible as an explicit mask solution while the instance fits in 64 bits.
inline ClusterLpSolution fractional_star_solution(const LineGraphInstance& lgi) {
    int m = lgi.inst.n();
    if (m > 64)
        throw CapacityError("fractional_star_solution: " + std::to_string(m) +
                            " vertices exceed the 64-bit mask capacity");
    ClusterLpSolution sol;
    sol.n = m;
    for (int v = 0; v < lgi.base_n; ++v) {
        std::uint64_t mask = 0;
        for (int e = 0; e < m; ++e) {
            auto [a, b] = lgi.edge_of[static_cast<std::size_t>(e)];
            if (a == v || b == v) mask |= 1ull << e;
        }
        sol.z.emplace_back(mask, 0.5);
    }
    std::sort(sol.z.begin(), sol.z.end());
    sol.x = FractionalAssignment(m);
    for (int u = 0; u < m; ++u)
        for (int v = u + 1; v < m; ++v) sol.x.set(u, v, 1.0 - sol.y_pair(u, v));
    sol.lp_value = objective_fractional(lgi.inst, sol.x);
    return sol;
}

/// Greedy residual stars: cluster i collects the base edges at order[i] not
/// taken by earlier stars. Every cluster is a +clique.
inline Clustering star_clustering(const LineGraphInstance& lgi, const std::vector<int>& order) {
    int n = lgi.base_n;
    if (static_cast<int>(order.size()) != n)
        throw ValidationError("star_clustering: order must permute the base vertices");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int v : order) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
            throw ValidationError("star_clustering: order must permute the base vertices");
        seen[static_cast<std::size_t>(v)] = 1;
    }
    int m = lgi.inst.n();
    std::vector<char> taken(static_cast<std::size_t>(m), 0);
    Clustering out;
    for (int v : order) {
        std::vector<int> cluster;
        for (int e = 0; e < m; ++e) {
            auto [a, b] = lgi.edge_of[static_cast<std::size_t>(e)];
            if ((a == v || b == v) && !taken[static_cast<std::size_t>(e)]) {
                taken[static_cast<std::size_t>(e)] = 1;
                cluster.push_back(e);
            }
        }
        if (!cluster.empty()) out.clusters.push_back(std::move(cluster));
    }
    return out;
}

/// Audit: every vertex of every cluster keeps at least half the cluster as
/// +neighbors (counting itself) — a property of optimal clusterings on this
/// family used to sanity-check oracle witnesses.
inline bool cluster_size_bound_check(const LineGraphInstance& lgi, const Clustering& c) {
    for (const auto& cluster : c.clusters)
        for (int u : cluster) {
            int inside = 1;  // u itself
            for (int v : cluster)
                if (v != u && lgi.inst.is_plus(u, v)) ++inside;
            if (2 * inside < static_cast<int>(cluster.size())) return false;
        }
    return true;
}

struct GapRow {
    int n = 0;
    long long vertices = 0;
    long long star_cost = 0;               // exact integer
    long long frac_num = 0, frac_den = 0;  // fractional objective
    long long ratio_num = 0, ratio_den = 0;
    std::optional<long long> opt;       // oracle, small n only
    std::optional<double> lp_value;     // exact cluster LP, small n only
};

/// Exact accounting per base size: fractional value n(n-1)(n-2)/4, star
/// cost n(n-1)(n-2)/3, ratio reduced with integer gcd. For instances within
/// oracle/LP capacity the row also carries opt and the exact LP optimum.
inline GapRow gap_row(int n, bool verify_construction = true) {
    if (n < 3) throw ValidationError("gap_row: need base n >= 3");
    GapRow row;
    row.n = n;
    long long nn = n;
    row.vertices = nn * (nn - 1) / 2;
    row.star_cost = nn * (nn - 1) * (nn - 2) / 3;
    row.frac_num = nn * (nn - 1) * (nn - 2);
    row.frac_den = 4;
    long long g = std::gcd(row.frac_num, row.frac_den);
    row.frac_num /= g;
    row.frac_den /= g;
    row.ratio_num = row.star_cost * row.frac_den;
    row.ratio_den = row.frac_num;
    g = std::gcd(row.ratio_num, row.ratio_den);
    if (g > 0) {
        row.ratio_num /= g;
        row.ratio_den /= g;
    }
    if (verify_construction) {
        auto lgi = build_line_graph_instance(n);
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        auto stars = star_clustering(lgi, order);
        stars.validate(lgi.inst.n());
        if (objective_clustering(lgi.inst, stars) != row.star_cost)
            throw ValidationError("gap_row: star cost identity broken at n=" +
                                  std::to_string(n));
        if (lgi.inst.n() <= 12) {
            auto opt = solve_exact(lgi.inst);
            row.opt = opt.opt_value;
            auto lp = solve_cluster_lp_exact(lgi.inst);
            row.lp_value = lp.lp_value;
        }
    }
    return row;
}

/// Table over several base sizes. Construction verification is O(V^2) per
/// row, so it is skipped beyond verify_up_to (the arithmetic is exact for
/// any n).
inline std::vector<GapRow> gap_report(const std::vector<int>& ns, int verify_up_to = 60) {
    std::vector<GapRow> out;
    for (int n : ns) out.push_back(gap_row(n, n <= verify_up_to));
    return out;
}

}  // namespace cclp
