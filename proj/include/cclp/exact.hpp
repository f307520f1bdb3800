#pragma once

#include <cstdint>
#include <vector>

#include "cclp/instance.hpp"

namespace cclp {

struct OptResult {
    long long opt_value = 0;
    Clustering witness;
    std::uint64_t partitions_enumerated = 0;
};

namespace detail {

// DFS over restricted-growth strings, pruning when the partial cost
// reaches the incumbent. Lexicographic order means the first optimum
// found is the tie-break winner.
struct ExactSearch {
    const Instance& inst;
    int n;
    std::vector<int> assign;   // block index per vertex
    std::vector<int> best;
    long long best_cost;
    std::uint64_t leaves = 0;

    explicit ExactSearch(const Instance& i)
        : inst(i), n(i.n()), assign(static_cast<std::size_t>(i.n()), 0),
          best(static_cast<std::size_t>(i.n()), 0),
          best_cost(static_cast<long long>(i.pair_count()) + 1) {}

    void run() { dfs(0, 0, 0); }

    void dfs(int v, int max_block, long long partial) {
        if (partial >= best_cost) return;
        if (v == n) {
            ++leaves;
            best_cost = partial;
            best = assign;
            return;
        }
        for (int b = 0; b <= max_block; ++b) {
            long long delta = 0;
            for (int u = 0; u < v; ++u) {
                bool same = assign[static_cast<std::size_t>(u)] == b;
                if (inst.is_plus(u, v) != same) ++delta;
            }
            assign[static_cast<std::size_t>(v)] = b;
            dfs(v + 1, b == max_block ? max_block + 1 : max_block, partial + delta);
        }
    }
};

}  // namespace detail

/// Brute-force optimum over all set partitions. Deterministic tie-break:
/// lexicographically smallest restricted-growth string.
inline OptResult solve_exact(const Instance& inst, int max_n = 12) {
    if (inst.n() > max_n)
        throw CapacityError("solve_exact: n=" + std::to_string(inst.n()) + " exceeds max_n=" +
                            std::to_string(max_n) + " (Bell(" + std::to_string(inst.n()) +
                            ") ~ " + std::to_string(bell_number(inst.n())) + " partitions)");
    detail::ExactSearch search(inst);
    search.run();
    OptResult res;
    res.opt_value = search.best_cost;
    res.witness = Clustering::from_labels(search.best);
    res.partitions_enumerated = search.leaves;
    return res;
}

/// A clustering is good w.r.t. (K, E_adm) iff it splits no atom and
/// co-clusters no non-admissible cross-atom pair.
inline bool is_good_clustering(const Clustering& c, const Clustering& atoms, int n,
                               const std::vector<std::uint64_t>& admissible) {
    c.validate(n);
    atoms.validate(n);
    auto lab = c.labels(n);
    auto atom_lab = atoms.labels(n);
    for (const auto& k : atoms.clusters)
        for (std::size_t i = 0; i < k.size(); ++i)
            for (std::size_t j = i + 1; j < k.size(); ++j)
                if (lab[static_cast<std::size_t>(k[i])] != lab[static_cast<std::size_t>(k[j])])
                    return false;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (atom_lab[static_cast<std::size_t>(u)] == atom_lab[static_cast<std::size_t>(v)])
                continue;
            if (lab[static_cast<std::size_t>(u)] != lab[static_cast<std::size_t>(v)]) continue;
            if (!std::binary_search(admissible.begin(), admissible.end(), pair_key(u, v)))
                return false;
        }
    return true;
}

}  // namespace cclp
