#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "cclp/exact.hpp"
#include "cclp/instance.hpp"
#include "cclp/rounding.hpp"

namespace cclp {

/// Atom-averaged edge weights: w_uv is the probability that an edge between
/// a random vertex of K_u and one of K_v is a +edge; pairs inside one atom
/// count as +edges (including u = v), so w_uv = 1 there.
struct AveragedWeights {
    int n = 0;
    std::vector<int> atom_of;    // atom index per vertex
    std::vector<int> k;          // size of the vertex's atom
    std::vector<double> w;       // n x n weights, diagonal 1
    std::vector<double> w_total; // w_u = sum_v w_uv

    double at(int u, int v) const { return w[static_cast<std::size_t>(u) * n + v]; }
};

inline AveragedWeights averaged_weights(const Instance& inst, const Clustering& atoms) {
    int n = inst.n();
    atoms.validate(n);
    AveragedWeights aw;
    aw.n = n;
    aw.atom_of = atoms.labels(n);
    aw.k.assign(static_cast<std::size_t>(n), 0);
    for (int u = 0; u < n; ++u)
        aw.k[static_cast<std::size_t>(u)] =
            static_cast<int>(atoms.clusters[static_cast<std::size_t>(
                                                aw.atom_of[static_cast<std::size_t>(u)])]
                                 .size());
    int na = static_cast<int>(atoms.clusters.size());
    // +edge counts between atom pairs.
    std::vector<long> cross(static_cast<std::size_t>(na) * na, 0);
    for (auto key : inst.plus_keys()) {
        int a = aw.atom_of[static_cast<std::size_t>(pair_key_lo(key))];
        int b = aw.atom_of[static_cast<std::size_t>(pair_key_hi(key))];
        if (a == b) continue;
        ++cross[static_cast<std::size_t>(a) * na + b];
        ++cross[static_cast<std::size_t>(b) * na + a];
    }
    aw.w.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            int a = aw.atom_of[static_cast<std::size_t>(u)],
                b = aw.atom_of[static_cast<std::size_t>(v)];
            aw.w[static_cast<std::size_t>(u) * n + v] =
                a == b ? 1.0
                       : static_cast<double>(cross[static_cast<std::size_t>(a) * na + b]) /
                             (static_cast<double>(aw.k[static_cast<std::size_t>(u)]) *
                              aw.k[static_cast<std::size_t>(v)]);
        }
    aw.w_total.assign(static_cast<std::size_t>(n), 0.0);
    for (int u = 0; u < n; ++u) {
        double s = 0.0;
        for (int v = 0; v < n; ++v) s += aw.at(u, v);
        aw.w_total[static_cast<std::size_t>(u)] = s;
    }
    return aw;
}

/// Symmetric difference |N+_u ^ C| with the self-loop convention u in N+_u.
inline int plus_neighborhood_symdiff(const Instance& inst, int u, const std::vector<int>& c) {
    int inter = 0;
    for (int v : c)
        if (v == u || inst.is_plus(u, v)) ++inter;
    int deg = 1 + static_cast<int>(inst.plus_neighbors(u).size());
    return deg + static_cast<int>(c.size()) - 2 * inter;
}

/// Atoms: start from a seeded classic pivot clustering, make a singleton out
/// of every vertex whose +neighborhood deviates from its cluster.
inline Clustering build_atoms(const Instance& inst, double beta = 0.1, std::uint64_t seed = 0) {
    int n = inst.n();
    Clustering start = round_classic_pivot(inst, seed);
    std::vector<char> marked(static_cast<std::size_t>(n), 0);
    for (const auto& c : start.clusters) {
        if (c.size() <= 1) continue;
        int num_marked = 0;
        for (int u : c)
            if (plus_neighborhood_symdiff(inst, u, c) >
                beta / 2.0 * static_cast<double>(c.size())) {
                marked[static_cast<std::size_t>(u)] = 1;
                ++num_marked;
            }
        if (num_marked >= beta * static_cast<double>(c.size()) / 3.0)
            for (int u : c) marked[static_cast<std::size_t>(u)] = 1;
    }
    Clustering atoms;
    for (const auto& c : start.clusters) {
        std::vector<int> rest;
        for (int u : c) {
            if (marked[static_cast<std::size_t>(u)])
                atoms.clusters.push_back({u});
            else
                rest.push_back(u);
        }
        if (!rest.empty()) atoms.clusters.push_back(std::move(rest));
    }
    return atoms;
}

struct PreclusteredInstance {
    int n = 0;
    Clustering atoms;
    std::vector<std::uint64_t> e1;          // distinct-vertex pairs of E^1
    std::vector<std::uint64_t> e2;          // distinct-vertex pairs of E^2
    std::vector<std::uint64_t> admissible;  // E_adm, sorted pair keys
};

/// Admissible edges per the degree-similarity (E^1) and common-neighborhood
/// (E^2) filters, with whole-atom-pair demotion at the end.
inline PreclusteredInstance build_admissible(const Instance& inst, const Clustering& atoms,
                                             double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw ValidationError("build_admissible: eps must lie in (0,1)");
    int n = inst.n();
    AveragedWeights aw = averaged_weights(inst, atoms);
    auto in_e1 = [&](int u, int v) {
        double wu = aw.w_total[static_cast<std::size_t>(u)];
        double wv = aw.w_total[static_cast<std::size_t>(v)];
        return eps * wv < wu && wu < wv / eps;  // strict on both sides
    };
    auto in_e2 = [&](int u, int v) {
        if (aw.atom_of[static_cast<std::size_t>(u)] == aw.atom_of[static_cast<std::size_t>(v)])
            return true;
        if (!in_e1(u, v)) return false;
        double s = 0.0;
        for (int p = 0; p < n; ++p)
            if (in_e1(u, p) && in_e1(v, p)) s += aw.at(u, p) * aw.at(v, p);
        return s > eps * (aw.w_total[static_cast<std::size_t>(u)] +
                          aw.w_total[static_cast<std::size_t>(v)]);
    };

    PreclusteredInstance pre;
    pre.n = n;
    pre.atoms = atoms;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (in_e1(u, v)) pre.e1.push_back(pair_key(u, v));
            if (in_e2(u, v)) pre.e2.push_back(pair_key(u, v));
        }

    // Cross-atom E^2 pairs are candidates; an atom pair stays admissible only
    // if every pair between the two atoms qualified.
    int na = static_cast<int>(atoms.clusters.size());
    std::vector<char> pair_ok(static_cast<std::size_t>(na) * na, 1);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            int a = aw.atom_of[static_cast<std::size_t>(u)],
                b = aw.atom_of[static_cast<std::size_t>(v)];
            if (a == b) continue;
            if (!in_e2(u, v)) {
                pair_ok[static_cast<std::size_t>(a) * na + b] = 0;
                pair_ok[static_cast<std::size_t>(b) * na + a] = 0;
            }
        }
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            int a = aw.atom_of[static_cast<std::size_t>(u)],
                b = aw.atom_of[static_cast<std::size_t>(v)];
            if (a != b && pair_ok[static_cast<std::size_t>(a) * na + b] && in_e2(u, v))
                pre.admissible.push_back(pair_key(u, v));
        }
    std::sort(pre.admissible.begin(), pre.admissible.end());
    return pre;
}

struct PreclusterAudit {
    long long opt = 0;
    long long best_good_cost = 0;
    Clustering best_good;
    double good_over_opt = 0.0;
    std::size_t admissible_count = 0;
    double admissible_over_opt = 0.0;
};

namespace detail {

// Enumerates partitions of the atoms (never splitting one) where two atoms
// may share a cluster only when their pair is admissible.
struct GoodSearch {
    const Instance& inst;
    const Clustering& atoms;
    const std::vector<char>& compat;  // atom-pair admissibility, na x na
    int na;
    std::vector<int> assign, best;
    long long best_cost;

    GoodSearch(const Instance& i, const Clustering& a, const std::vector<char>& c)
        : inst(i), atoms(a), compat(c), na(static_cast<int>(a.clusters.size())),
          assign(a.clusters.size(), 0), best(a.clusters.size(), 0),
          best_cost(static_cast<long long>(i.pair_count()) + 1) {}

    long long cluster_cost(const std::vector<int>& members) const {
        long long within_minus = 0;
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j)
                if (!inst.is_plus(members[i], members[j])) ++within_minus;
        return within_minus;
    }

    void run() {
        dfs(0, 0);
        if (best_cost > static_cast<long long>(inst.pair_count()))
            throw ValidationError("audit: no good clustering found");  // cannot happen: atoms themselves are good
    }

    long long total_cost(const std::vector<int>& a) const {
        std::vector<int> lab(static_cast<std::size_t>(inst.n()), 0);
        for (int i = 0; i < na; ++i)
            for (int v : atoms.clusters[static_cast<std::size_t>(i)])
                lab[static_cast<std::size_t>(v)] = a[static_cast<std::size_t>(i)];
        return objective_clustering(inst, Clustering::from_labels(lab));
    }

    void dfs(int i, int max_block) {
        if (i == na) {
            long long c = total_cost(assign);
            if (c < best_cost) {
                best_cost = c;
                best = assign;
            }
            return;
        }
        for (int b = 0; b <= max_block; ++b) {
            bool ok = true;
            for (int j = 0; j < i && ok; ++j)
                if (assign[static_cast<std::size_t>(j)] == b &&
                    !compat[static_cast<std::size_t>(i) * na + j])
                    ok = false;
            if (!ok) continue;
            assign[static_cast<std::size_t>(i)] = b;
            dfs(i + 1, b == max_block ? max_block + 1 : max_block);
        }
    }
};

}  // namespace detail

/// Compare the best clustering consistent with (atoms, E_adm) to the true
/// optimum. Ratios are reported, not asserted.
inline PreclusterAudit audit_preclustering(const Instance& inst, const PreclusteredInstance& pre,
                                           int max_n = 12) {
    auto opt = solve_exact(inst, max_n);
    int na = static_cast<int>(pre.atoms.clusters.size());
    auto atom_of = pre.atoms.labels(inst.n());
    std::vector<char> compat(static_cast<std::size_t>(na) * na, 1);
    for (int u = 0; u < inst.n(); ++u)
        for (int v = u + 1; v < inst.n(); ++v) {
            int a = atom_of[static_cast<std::size_t>(u)], b = atom_of[static_cast<std::size_t>(v)];
            if (a == b) continue;
            if (!std::binary_search(pre.admissible.begin(), pre.admissible.end(),
                                    pair_key(u, v))) {
                compat[static_cast<std::size_t>(a) * na + b] = 0;
                compat[static_cast<std::size_t>(b) * na + a] = 0;
            }
        }
    detail::GoodSearch search(inst, pre.atoms, compat);
    search.run();

    PreclusterAudit audit;
    audit.opt = opt.opt_value;
    audit.best_good_cost = search.best_cost;
    std::vector<int> lab(static_cast<std::size_t>(inst.n()), 0);
    for (int i = 0; i < na; ++i)
        for (int v : pre.atoms.clusters[static_cast<std::size_t>(i)])
            lab[static_cast<std::size_t>(v)] = search.best[static_cast<std::size_t>(i)];
    audit.best_good = Clustering::from_labels(lab);
    audit.good_over_opt = audit.opt > 0
                              ? static_cast<double>(audit.best_good_cost) / audit.opt
                              : (audit.best_good_cost == 0 ? 1.0 : 0.0);
    audit.admissible_count = pre.admissible.size();
    audit.admissible_over_opt =
        static_cast<double>(audit.admissible_count) / std::max<long long>(audit.opt, 1);
    return audit;
}

/// Post-processing splitter: while some atom sits in a cluster barely larger
/// than itself (within eps1 * |N_adm|), split that cluster.
inline Clustering enforce_a1(const Clustering& c, const PreclusteredInstance& pre, double eps1) {
    int n = pre.n;
    auto atom_of = pre.atoms.labels(n);
    std::vector<int> adm_deg(static_cast<std::size_t>(n), 0);
    for (auto key : pre.admissible) {
        ++adm_deg[static_cast<std::size_t>(pair_key_lo(key))];
        ++adm_deg[static_cast<std::size_t>(pair_key_hi(key))];
    }
    Clustering cur = c;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t ci = 0; ci < cur.clusters.size() && !changed; ++ci) {
            const auto& cl = cur.clusters[ci];
            for (int u : cl) {
                int ku = static_cast<int>(
                    pre.atoms.clusters[static_cast<std::size_t>(atom_of[static_cast<std::size_t>(u)])]
                        .size());
                double bound = ku + eps1 * adm_deg[static_cast<std::size_t>(u)];
                if (ku < static_cast<int>(cl.size()) &&
                    static_cast<double>(cl.size()) <= bound) {
                    std::vector<int> atom_part, rest;
                    for (int v : cl)
                        (atom_of[static_cast<std::size_t>(v)] ==
                                 atom_of[static_cast<std::size_t>(u)]
                             ? atom_part
                             : rest)
                            .push_back(v);
                    cur.clusters[ci] = std::move(atom_part);
                    cur.clusters.push_back(std::move(rest));
                    changed = true;
                    break;
                }
            }
        }
    }
    return cur;
}

}  // namespace cclp
