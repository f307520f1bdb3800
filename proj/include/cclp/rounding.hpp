#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cclp/instance.hpp"
#include "cclp/lp.hpp"

namespace cclp {

/// Pivot rounding parameters: +edges with x <= tau1 join the pivot always,
/// x in (tau1, tau2] join iff the sampled cluster contains them, x > tau2
/// join independently with probability 1-x. -edges join independently with
/// probability 1-x (or 1-x^2 when minus_quadratic).
struct RuleSet {
    std::string name;
    double tau1 = 0.4;
    double tau2 = 1.0;
    bool minus_quadratic = false;

    static RuleSet alg3() { return {"alg3", 0.4, 1.0, false}; }
    static RuleSet alg4() { return {"alg4", 0.4, 0.57, true}; }
    static RuleSet independent() { return {"independent", 0.0, 0.0, false}; }

    void validate() const {
        if (!(0.0 <= tau1 && tau1 <= tau2 && tau2 <= 1.0))
            throw ValidationError("RuleSet: need 0 <= tau1 <= tau2 <= 1");
    }

    bool is_short_plus(double x) const { return x <= tau1; }
    bool is_dependent_plus(double x) const { return x > tau1 && x <= tau2; }
    double minus_join(double x) const { return minus_quadratic ? 1.0 - x * x : 1.0 - x; }
};

namespace detail {

// Walker alias table for O(1) discrete sampling.
class AliasTable {
  public:
    explicit AliasTable(const std::vector<double>& weights) {
        std::size_t n = weights.size();
        if (n == 0) throw ValidationError("AliasTable: empty support");
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw ValidationError("AliasTable: negative weight");
            total += w;
        }
        if (total <= 0.0) throw ValidationError("AliasTable: zero total weight");
        prob_.resize(n);
        alias_.assign(n, 0);
        std::vector<double> scaled(n);
        for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * n / total;
        std::vector<std::size_t> small, large;
        for (std::size_t i = 0; i < n; ++i)
            (scaled[i] < 1.0 ? small : large).push_back(i);
        while (!small.empty() && !large.empty()) {
            std::size_t s = small.back(), l = large.back();
            small.pop_back();
            large.pop_back();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] = scaled[l] + scaled[s] - 1.0;
            (scaled[l] < 1.0 ? small : large).push_back(l);
        }
        for (std::size_t i : large) prob_[i] = 1.0;
        for (std::size_t i : small) prob_[i] = 1.0;
    }

    std::size_t sample(std::mt19937_64& rng) const {
        std::uniform_int_distribution<std::size_t> pick(0, prob_.size() - 1);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::size_t i = pick(rng);
        return unif(rng) < prob_[i] ? i : alias_[i];
    }

  private:
    std::vector<double> prob_;
    std::vector<std::size_t> alias_;
};

// Samples cluster masks: globally proportional to z, or conditioned on
// containing a given vertex (Eq: the conditional weights already sum to 1).
class SetSampler {
  public:
    explicit SetSampler(const ClusterLpSolution& sol) : sol_(&sol) {
        if (sol.z.empty()) throw ValidationError("SetSampler: solution has empty support");
        std::vector<double> weights;
        for (const auto& [mask, v] : sol.z) weights.push_back(v);
        global_.emplace_back(weights);
        for (int u = 0; u < sol.n; ++u) {
            std::vector<double> w;
            per_vertex_index_.emplace_back();
            for (std::size_t i = 0; i < sol.z.size(); ++i)
                if (sol.z[i].first >> u & 1) {
                    w.push_back(sol.z[i].second);
                    per_vertex_index_.back().push_back(i);
                }
            if (w.empty())
                throw ValidationError("SetSampler: vertex " + std::to_string(u) +
                                      " uncovered by z");
            per_vertex_.emplace_back(w);
        }
    }

    std::uint64_t sample_global(std::mt19937_64& rng) const {
        return sol_->z[global_[0].sample(rng)].first;
    }

    std::uint64_t sample_containing(int u, std::mt19937_64& rng) const {
        auto& idx = per_vertex_index_[static_cast<std::size_t>(u)];
        return sol_->z[idx[per_vertex_[static_cast<std::size_t>(u)].sample(rng)]].first;
    }

  private:
    const ClusterLpSolution* sol_;
    std::vector<AliasTable> global_;
    std::vector<AliasTable> per_vertex_;
    std::vector<std::vector<std::size_t>> per_vertex_index_;
};

}  // namespace detail

struct PivotStep {
    int pivot;
    std::uint64_t sample_mask;
    std::vector<int> cluster;
};

struct RoundingTrace {
    std::uint64_t seed = 0;
    std::vector<PivotStep> steps;
    Clustering clustering;
};

/// Repeatedly draw S proportional to z; the survivors of S form a cluster.
inline Clustering round_cluster_based(const ClusterLpSolution& sol, std::uint64_t seed) {
    detail::SetSampler sampler(sol);
    std::mt19937_64 rng(seed);
    std::vector<char> alive(static_cast<std::size_t>(sol.n), 1);
    int remaining = sol.n;
    Clustering out;
    while (remaining > 0) {
        std::uint64_t s = sampler.sample_global(rng);
        std::vector<int> cluster;
        for (int v = 0; v < sol.n; ++v)
            if ((s >> v & 1) && alive[static_cast<std::size_t>(v)]) cluster.push_back(v);
        if (cluster.empty()) continue;
        for (int v : cluster) alive[static_cast<std::size_t>(v)] = 0;
        remaining -= static_cast<int>(cluster.size());
        out.clusters.push_back(std::move(cluster));
    }
    return out;
}

namespace detail {

// One pivot iteration: builds the pivot's cluster from the still-alive
// vertices. Returns the sampled set mask.
inline std::uint64_t pivot_iteration(const Instance& inst, const ClusterLpSolution& sol,
                                     const RuleSet& rules, const SetSampler& sampler, int pivot,
                                     const std::vector<char>& alive, std::mt19937_64& rng,
                                     std::vector<int>& cluster) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uint64_t s = sampler.sample_containing(pivot, rng);
    cluster.clear();
    cluster.push_back(pivot);
    for (int v = 0; v < sol.n; ++v) {
        if (v == pivot || !alive[static_cast<std::size_t>(v)]) continue;
        double x = sol.x.x(pivot, v);
        bool join;
        if (inst.is_plus(pivot, v)) {
            if (rules.is_short_plus(x))
                join = true;
            else if (rules.is_dependent_plus(x))
                join = (s >> v & 1) != 0;
            else
                join = unif(rng) < 1.0 - x;
        } else {
            join = unif(rng) < rules.minus_join(x);
        }
        if (join) cluster.push_back(v);
    }
    return s;
}

}  // namespace detail

/// Pivot-based rounding (Algorithm family with hybrid dependent updates).
inline RoundingTrace round_pivot(const Instance& inst, const ClusterLpSolution& sol,
                                 const RuleSet& rules, std::uint64_t seed) {
    rules.validate();
    if (inst.n() != sol.n) throw ValidationError("round_pivot: instance/solution mismatch");
    detail::SetSampler sampler(sol);
    std::mt19937_64 rng(seed);
    RoundingTrace trace;
    trace.seed = seed;
    std::vector<char> alive(static_cast<std::size_t>(sol.n), 1);
    std::vector<int> order;
    int remaining = sol.n;
    std::vector<int> cluster;
    while (remaining > 0) {
        // Uniform pivot among survivors.
        std::uniform_int_distribution<int> pick(0, remaining - 1);
        int k = pick(rng), pivot = -1;
        for (int v = 0; v < sol.n; ++v)
            if (alive[static_cast<std::size_t>(v)] && k-- == 0) {
                pivot = v;
                break;
            }
        std::uint64_t s =
            detail::pivot_iteration(inst, sol, rules, sampler, pivot, alive, rng, cluster);
        for (int v : cluster) alive[static_cast<std::size_t>(v)] = 0;
        remaining -= static_cast<int>(cluster.size());
        trace.steps.push_back({pivot, s, cluster});
        trace.clustering.clusters.push_back(cluster);
    }
    return trace;
}

/// Combinatorial pivot baseline: the pivot grabs all its +neighbors.
inline Clustering round_classic_pivot(const Instance& inst, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    int n = inst.n();
    std::vector<char> alive(static_cast<std::size_t>(n), 1);
    int remaining = n;
    Clustering out;
    while (remaining > 0) {
        std::uniform_int_distribution<int> pick(0, remaining - 1);
        int k = pick(rng), pivot = -1;
        for (int v = 0; v < n; ++v)
            if (alive[static_cast<std::size_t>(v)] && k-- == 0) {
                pivot = v;
                break;
            }
        std::vector<int> cluster{pivot};
        for (int v = 0; v < n; ++v)
            if (v != pivot && alive[static_cast<std::size_t>(v)] && inst.is_plus(pivot, v))
                cluster.push_back(v);
        for (int v : cluster) alive[static_cast<std::size_t>(v)] = 0;
        remaining -= static_cast<int>(cluster.size());
        out.clusters.push_back(std::move(cluster));
    }
    return out;
}

struct BestOfResult {
    Clustering clustering;
    long long cost = 0;
};

/// Run cluster-based and pivot rounding `trials` times each, keep the best.
inline BestOfResult best_of(const Instance& inst, const ClusterLpSolution& sol,
                            const RuleSet& rules, int trials, std::uint64_t seed) {
    if (trials <= 0) throw ValidationError("best_of: trials must be positive");
    BestOfResult best;
    best.cost = -1;
    std::mt19937_64 seeder(seed);
    for (int t = 0; t < trials; ++t) {
        Clustering a = round_cluster_based(sol, seeder());
        Clustering b = round_pivot(inst, sol, rules, seeder()).clustering;
        for (Clustering* c : {&a, &b}) {
            long long cost = objective_clustering(inst, *c);
            if (best.cost < 0 || cost < best.cost) {
                best.cost = cost;
                best.clustering = std::move(*c);
            }
        }
    }
    return best;
}

// ---- Monte Carlo harnesses ---------------------------------------------

struct PairStats {
    int n = 0;
    long trials = 0;
    std::vector<long> count;  // n x n event counts

    double freq(int u, int v) const {
        return static_cast<double>(count[static_cast<std::size_t>(u) * n + v]) / trials;
    }
    double stderr_(int u, int v) const {
        double p = freq(u, v);
        return std::sqrt(std::max(p * (1.0 - p), 1e-12) / trials);
    }
};

/// Empirical Pr[u, v separated] under cluster-based rounding.
inline PairStats estimate_separation_cluster_based(const ClusterLpSolution& sol, long trials,
                                                   std::uint64_t seed) {
    PairStats st;
    st.n = sol.n;
    st.trials = trials;
    st.count.assign(static_cast<std::size_t>(sol.n) * sol.n, 0);
    std::mt19937_64 seeder(seed);
    for (long t = 0; t < trials; ++t) {
        auto c = round_cluster_based(sol, seeder());
        auto lab = c.labels(sol.n);
        for (int u = 0; u < sol.n; ++u)
            for (int v = u + 1; v < sol.n; ++v)
                if (lab[static_cast<std::size_t>(u)] != lab[static_cast<std::size_t>(v)]) {
                    ++st.count[static_cast<std::size_t>(u) * sol.n + v];
                    ++st.count[static_cast<std::size_t>(v) * sol.n + u];
                }
    }
    return st;
}

struct PivotMarginals {
    int n = 0;
    int pivot = 0;
    long trials = 0;
    std::vector<long> in_cluster;   // per-vertex inclusion counts
    std::vector<long> joint;        // n x n joint inclusion counts

    double inclusion(int v) const {
        return static_cast<double>(in_cluster[static_cast<std::size_t>(v)]) / trials;
    }
    double joint_inclusion(int v, int w) const {
        return static_cast<double>(joint[static_cast<std::size_t>(v) * n + w]) / trials;
    }
};

/// Forced-pivot harness: repeat the first pivot iteration with pivot u on the
/// full vertex set and tally cluster membership.
inline PivotMarginals estimate_pivot_marginals(const Instance& inst, const ClusterLpSolution& sol,
                                               const RuleSet& rules, int pivot, long trials,
                                               std::uint64_t seed) {
    rules.validate();
    detail::SetSampler sampler(sol);
    std::mt19937_64 rng(seed);
    PivotMarginals pm;
    pm.n = sol.n;
    pm.pivot = pivot;
    pm.trials = trials;
    pm.in_cluster.assign(static_cast<std::size_t>(sol.n), 0);
    pm.joint.assign(static_cast<std::size_t>(sol.n) * sol.n, 0);
    std::vector<char> alive(static_cast<std::size_t>(sol.n), 1);
    std::vector<int> cluster;
    for (long t = 0; t < trials; ++t) {
        detail::pivot_iteration(inst, sol, rules, sampler, pivot, alive, rng, cluster);
        for (std::size_t i = 0; i < cluster.size(); ++i) {
            ++pm.in_cluster[static_cast<std::size_t>(cluster[i])];
            for (std::size_t j = 0; j < cluster.size(); ++j)
                ++pm.joint[static_cast<std::size_t>(cluster[i]) * sol.n + cluster[j]];
        }
    }
    return pm;
}

/// Closed-form Pr[v in C | pivot u] for a rule set (the per-pivot claim table).
inline double pivot_inclusion_probability(const Instance& inst, const ClusterLpSolution& sol,
                                          const RuleSet& rules, int u, int v) {
    if (u == v) return 1.0;
    double x = sol.x.x(u, v);
    if (inst.is_plus(u, v)) {
        if (rules.is_short_plus(x)) return 1.0;
        if (rules.is_dependent_plus(x)) return sol.y_pair(u, v);
        return 1.0 - x;
    }
    return rules.minus_join(x);
}

/// Full-run per-pair co-clustering frequencies under pivot rounding.
inline PairStats estimate_edge_marginals(const Instance& inst, const ClusterLpSolution& sol,
                                         const RuleSet& rules, long trials, std::uint64_t seed) {
    PairStats st;
    st.n = sol.n;
    st.trials = trials;
    st.count.assign(static_cast<std::size_t>(sol.n) * sol.n, 0);
    std::mt19937_64 seeder(seed);
    for (long t = 0; t < trials; ++t) {
        auto trace = round_pivot(inst, sol, rules, seeder());
        auto lab = trace.clustering.labels(sol.n);
        for (int u = 0; u < sol.n; ++u)
            for (int v = u + 1; v < sol.n; ++v)
                if (lab[static_cast<std::size_t>(u)] == lab[static_cast<std::size_t>(v)]) {
                    ++st.count[static_cast<std::size_t>(u) * sol.n + v];
                    ++st.count[static_cast<std::size_t>(v) * sol.n + u];
                }
    }
    return st;
}

}  // namespace cclp
