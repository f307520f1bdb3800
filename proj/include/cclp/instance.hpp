#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <vector>

#include <json.hpp>

#include "cclp/common.hpp"

namespace cclp {

/// Complete signed graph on n labeled vertices. Pairs listed in plus_edges
/// are +edges; every other pair is implicitly a -edge. Immutable after
/// construction.
class Instance {
  public:
    Instance(int n, std::vector<std::uint64_t> plus_keys) : n_(n), plus_(std::move(plus_keys)) {
        if (n_ < 1) throw ValidationError("Instance: n must be >= 1");
        std::sort(plus_.begin(), plus_.end());
        for (std::size_t i = 0; i < plus_.size(); ++i) {
            int u = pair_key_lo(plus_[i]), v = pair_key_hi(plus_[i]);
            if (u < 0 || v >= n_ || u >= v)
                throw ValidationError("Instance: invalid pair {" + std::to_string(u) + "," +
                                      std::to_string(v) + "}");
            if (i > 0 && plus_[i] == plus_[i - 1])
                throw ValidationError("Instance: duplicate pair {" + std::to_string(u) + "," +
                                      std::to_string(v) + "}");
        }
        build_adjacency();
    }

    static Instance from_pairs(int n, const std::vector<std::pair<int, int>>& pairs) {
        std::vector<std::uint64_t> keys;
        keys.reserve(pairs.size());
        for (auto [u, v] : pairs) {
            if (u == v) throw ValidationError("Instance: self-loop {" + std::to_string(u) + "," +
                                              std::to_string(v) + "}");
            keys.push_back(pair_key(u, v));
        }
        return Instance(n, std::move(keys));
    }

    int n() const { return n_; }
    std::size_t plus_count() const { return plus_.size(); }
    std::size_t pair_count() const {
        return static_cast<std::size_t>(n_) * (n_ - 1) / 2;
    }
    std::size_t minus_count() const { return pair_count() - plus_count(); }

    bool is_plus(int u, int v) const {
        return (adj_[static_cast<std::size_t>(u) * words_ + (v >> 6)] >> (v & 63)) & 1u;
    }

    const std::vector<std::uint64_t>& plus_keys() const { return plus_; }

    /// +neighborhood of u as a bitmask, valid for n <= 32.
    std::uint32_t plus_mask(int u) const {
        return static_cast<std::uint32_t>(adj_[static_cast<std::size_t>(u) * words_]);
    }

    std::vector<int> plus_neighbors(int u) const {
        std::vector<int> out;
        for (int v = 0; v < n_; ++v)
            if (v != u && is_plus(u, v)) out.push_back(v);
        return out;
    }

    bool operator==(const Instance& o) const { return n_ == o.n_ && plus_ == o.plus_; }

  private:
    void build_adjacency() {
        words_ = static_cast<std::size_t>((n_ + 63) / 64);
        adj_.assign(static_cast<std::size_t>(n_) * words_, 0);
        for (auto key : plus_) {
            int u = pair_key_lo(key), v = pair_key_hi(key);
            adj_[static_cast<std::size_t>(u) * words_ + (v >> 6)] |= 1ull << (v & 63);
            adj_[static_cast<std::size_t>(v) * words_ + (u >> 6)] |= 1ull << (u & 63);
        }
    }

    int n_;
    std::vector<std::uint64_t> plus_;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> adj_;
};

/// Partition of [0, n) into disjoint nonempty clusters.
struct Clustering {
    std::vector<std::vector<int>> clusters;

    /// Throws unless the clusters form a partition of [0, n).
    void validate(int n) const {
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::size_t total = 0;
        for (const auto& c : clusters) {
            if (c.empty()) throw ValidationError("Clustering: empty cluster");
            for (int v : c) {
                if (v < 0 || v >= n) throw ValidationError("Clustering: vertex out of range");
                if (seen[static_cast<std::size_t>(v)])
                    throw ValidationError("Clustering: vertex " + std::to_string(v) +
                                          " appears twice");
                seen[static_cast<std::size_t>(v)] = 1;
            }
            total += c.size();
        }
        if (total != static_cast<std::size_t>(n))
            throw ValidationError("Clustering: does not cover all vertices");
    }

    /// cluster index per vertex; requires a valid partition of [0, n).
    std::vector<int> labels(int n) const {
        std::vector<int> lab(static_cast<std::size_t>(n), -1);
        for (std::size_t i = 0; i < clusters.size(); ++i)
            for (int v : clusters[i]) lab[static_cast<std::size_t>(v)] = static_cast<int>(i);
        return lab;
    }

    static Clustering from_labels(const std::vector<int>& lab) {
        int k = 0;
        for (int l : lab) k = std::max(k, l + 1);
        Clustering c;
        c.clusters.resize(static_cast<std::size_t>(k));
        for (int v = 0; v < static_cast<int>(lab.size()); ++v)
            c.clusters[static_cast<std::size_t>(lab[static_cast<std::size_t>(v)])].push_back(v);
        return c;
    }

    static Clustering singletons(int n) {
        Clustering c;
        for (int v = 0; v < n; ++v) c.clusters.push_back({v});
        return c;
    }

    bool same_cluster(int u, int v, const std::vector<int>& lab) {
        return lab[static_cast<std::size_t>(u)] == lab[static_cast<std::size_t>(v)];
    }
};

/// Symmetric map over unordered pairs with values in [0, 1].
struct FractionalAssignment {
    int n = 0;
    std::vector<double> vals;  // n x n, symmetric, diagonal 0

    explicit FractionalAssignment(int nn = 0)
        : n(nn), vals(static_cast<std::size_t>(nn) * nn, 0.0) {}

    double& at(int u, int v) { return vals[static_cast<std::size_t>(u) * n + v]; }
    double x(int u, int v) const { return vals[static_cast<std::size_t>(u) * n + v]; }
    void set(int u, int v, double val) {
        at(u, v) = val;
        at(v, u) = val;
    }

    /// Indicator assignment of a clustering: x_uv = 0 iff same cluster.
    static FractionalAssignment indicator(int n, const Clustering& c) {
        FractionalAssignment f(n);
        auto lab = c.labels(n);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                f.set(u, v, lab[static_cast<std::size_t>(u)] == lab[static_cast<std::size_t>(v)]
                                ? 0.0
                                : 1.0);
        return f;
    }
};

/// Number of +edges across clusters plus -edges within clusters.
inline long long objective_clustering(const Instance& inst, const Clustering& c) {
    c.validate(inst.n());
    long long plus_within = 0, minus_within = 0;
    for (const auto& cl : c.clusters) {
        for (std::size_t i = 0; i < cl.size(); ++i)
            for (std::size_t j = i + 1; j < cl.size(); ++j) {
                if (inst.is_plus(cl[i], cl[j]))
                    ++plus_within;
                else
                    ++minus_within;
            }
    }
    return static_cast<long long>(inst.plus_count()) - plus_within + minus_within;
}

/// obj(x) = sum_{+edges} x_uv + sum_{-edges} (1 - x_uv).
inline double objective_fractional(const Instance& inst, const FractionalAssignment& x) {
    if (x.n != inst.n()) throw ValidationError("objective_fractional: dimension mismatch");
    double obj = 0.0;
    for (int u = 0; u < inst.n(); ++u)
        for (int v = u + 1; v < inst.n(); ++v)
            obj += inst.is_plus(u, v) ? x.x(u, v) : 1.0 - x.x(u, v);
    return obj;
}

/// Each pair is a +edge independently with probability plus_prob.
inline Instance generate_random(int n, double plus_prob, std::uint64_t seed) {
    if (n < 1) throw ValidationError("generate_random: n must be >= 1");
    if (!(plus_prob >= 0.0 && plus_prob <= 1.0))
        throw ValidationError("generate_random: plus_prob must lie in [0,1]");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::uint64_t> keys;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (unif(rng) < plus_prob) keys.push_back(pair_key(u, v));
    return Instance(n, std::move(keys));
}

// ---- JSON serialization -------------------------------------------------

inline nlohmann::json instance_to_json(const Instance& inst) {
    nlohmann::json edges = nlohmann::json::array();
    for (auto key : inst.plus_keys())
        edges.push_back({pair_key_lo(key), pair_key_hi(key)});
    return {{"n", inst.n()}, {"plus_edges", edges}};
}

inline Instance instance_from_json(const nlohmann::json& j) {
    if (!j.contains("n") || !j.contains("plus_edges"))
        throw ParseError("instance: missing 'n' or 'plus_edges'");
    int n = j.at("n").get<int>();
    std::vector<std::pair<int, int>> pairs;
    int line = 0;
    for (const auto& e : j.at("plus_edges")) {
        ++line;
        if (!e.is_array() || e.size() != 2)
            throw ParseError("instance: plus_edges entry " + std::to_string(line) +
                             " is not a pair");
        int u = e.at(0).get<int>(), v = e.at(1).get<int>();
        if (u == v)
            throw ParseError("instance: self-loop in plus_edges entry " + std::to_string(line));
        pairs.emplace_back(u, v);
    }
    try {
        return Instance::from_pairs(n, pairs);
    } catch (const ValidationError& ex) {
        throw ParseError(std::string("instance: ") + ex.what());
    }
}

inline void write_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    out << instance_to_json(inst).dump(2) << "\n";
}

inline Instance read_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(path + ": " + ex.what());
    }
    return instance_from_json(j);
}

inline nlohmann::json clustering_to_json(const Clustering& c) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& cl : c.clusters) arr.push_back(cl);
    return {{"clusters", arr}};
}

inline Clustering clustering_from_json(const nlohmann::json& j) {
    if (!j.contains("clusters")) throw ParseError("clustering: missing 'clusters'");
    Clustering c;
    for (const auto& cl : j.at("clusters")) c.clusters.push_back(cl.get<std::vector<int>>());
    return c;
}

}  // namespace cclp
