#pragma once

#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "cclp/lp.hpp"
#include "cclp/triangles.hpp"

namespace cclp {

/// Partition of [0,1] into intervals I_0..I_{t-1}, plus the policy for
/// subdividing the triple-mass coordinate inside a cell.
struct Discretization {
    std::vector<double> breakpoints;
    // Triple-mass refinement: `mid` sub-intervals when the two smallest edge
    // intervals lie in [refine_lo, refine_hi], `fine` when both lie in
    // [fine_lo, fine_hi].
    double refine_lo = 0.38, refine_hi = 0.65;
    double fine_lo = 0.38, fine_hi = 0.45;
    int coarse = 1, mid = 10, fine = 20;

    void validate() const {
        if (breakpoints.size() < 2 || breakpoints.front() != 0.0 || breakpoints.back() != 1.0)
            throw ValidationError("Discretization: breakpoints must run from 0 to 1");
        for (std::size_t i = 1; i < breakpoints.size(); ++i)
            if (!(breakpoints[i - 1] < breakpoints[i]))
                throw ValidationError("Discretization: breakpoints must be strictly increasing");
        if (coarse < 1 || mid < 1 || fine < 1)
            throw ValidationError("Discretization: refinement counts must be positive");
    }

    int t() const { return static_cast<int>(breakpoints.size()) - 1; }
    double l(int i) const { return breakpoints[static_cast<std::size_t>(i)]; }
    double r(int i) const { return breakpoints[static_cast<std::size_t>(i) + 1]; }

    /// Interval containing y; half-open [l, r), with the last interval
    /// closed so that interval_of(1) is well defined.
    int interval_of(double y) const {
        if (!(y >= 0.0 && y <= 1.0)) throw ValidationError("interval_of: y out of [0,1]");
        auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), y);
        int i = static_cast<int>(it - breakpoints.begin()) - 1;
        return std::min(i, t() - 1);
    }

    int triple_subdivisions(int i, int j) const {
        auto within = [&](int e, double lo, double hi) { return l(e) >= lo && r(e) <= hi; };
        if (within(i, fine_lo, fine_hi) && within(j, fine_lo, fine_hi)) return fine;
        if (within(i, refine_lo, refine_hi) && within(j, refine_lo, refine_hi)) return mid;
        return coarse;
    }
};

/// The production grid: dense around the two rounding thresholds 0.40 and
/// 0.57, coarse near the ends.
inline Discretization default_breakpoints() {
    Discretization d;
    d.breakpoints = {0,    0.05, 0.1,  0.2,  0.3,  0.35, 0.38, 0.39, 0.40, 0.405,
                     0.41, 0.42, 0.44, 0.45, 0.5,  0.55, 0.57, 0.58, 0.6,  0.65,
                     0.7,  0.75, 0.78, 0.8,  0.9,  0.95, 0.96, 0.99, 1};
    d.validate();
    return d;
}

// ---- Corner boxes and multilinear weights --------------------------------

/// The six diagonal covariance values of a triangle type (two per pivot).
inline std::array<double, 6> covariance_values(const std::array<double, 4>& q) {
    double cu = q[3] - q[0] * q[1];
    double cv = q[3] - q[0] * q[2];
    double cw = q[3] - q[1] * q[2];
    return {cu, cu, cv, cv, cw, cw};
}

/// Row/column interval placements of the six covariance values, following
/// the head/tail pairing (pivot u contributes at (I(y_uv), I(y_uw)) and its
/// mirror, and so on for v and w).
inline std::array<std::pair<int, int>, 6> covariance_placements(const Discretization& disc,
                                                                const std::array<double, 4>& q) {
    int a = disc.interval_of(q[0]);
    int b = disc.interval_of(q[1]);
    int c = disc.interval_of(q[2]);
    return {{{a, b}, {b, a}, {a, c}, {c, a}, {b, c}, {c, b}}};
}

/// Axis-aligned box of triangle types with its corner list (<= 16; collapsed
/// coordinates drop a factor of two).
struct CornerSet {
    std::array<double, 4> lo{}, hi{};
    std::vector<std::array<double, 4>> corners;

    static CornerSet from_box(const std::array<double, 4>& lo, const std::array<double, 4>& hi) {
        CornerSet cs;
        cs.lo = lo;
        cs.hi = hi;
        std::vector<int> free_dims;
        for (int i = 0; i < 4; ++i) {
            if (lo[i] > hi[i]) throw ValidationError("CornerSet: empty box");
            if (lo[i] < hi[i]) free_dims.push_back(i);
        }
        int m = static_cast<int>(free_dims.size());
        for (int mask = 0; mask < (1 << m); ++mask) {
            std::array<double, 4> q = lo;
            for (int d = 0; d < m; ++d)
                if (mask >> d & 1) q[static_cast<std::size_t>(free_dims[d])] =
                    hi[static_cast<std::size_t>(free_dims[d])];
            cs.corners.push_back(q);
        }
        return cs;
    }

    /// Product-form convex weights reconstructing any multilinear function
    /// of q from its corner values.
    std::vector<double> weights_for(const std::array<double, 4>& q) const {
        std::vector<double> w(corners.size(), 1.0);
        for (std::size_t c = 0; c < corners.size(); ++c)
            for (int i = 0; i < 4; ++i) {
                if (lo[i] == hi[i]) continue;
                double frac = (q[i] - lo[i]) / (hi[i] - lo[i]);
                w[c] *= (corners[c][i] == hi[i]) ? frac : 1.0 - frac;
            }
        return w;
    }
};

// ---- Model ---------------------------------------------------------------

struct SdpEntry {
    int block;  // 1 = covariance (Q), 2 = frequency (F)
    int row, col;  // 0-based, row <= col
    double value;
};

struct SdpVariable {
    std::array<double, 4> corner{};
    double obj = 0.0;  // d_tilde of the representative cell
    std::vector<SdpEntry> entries;
    // Representative cell: edge interval indices (i <= j <= k), triple-mass
    // sub-interval index, or degenerate pair interval.
    int cell_i = -1, cell_j = -1, cell_k = -1, cell_sub = 0;
    bool from_degenerate = false;
};

struct SdpModel {
    Discretization disc;
    std::string rules_name;
    double alpha = 0.0;
    int t = 0;
    std::vector<SdpVariable> vars;
    std::map<std::array<std::uint64_t, 4>, int> index;  // corner quadruple -> var

    int find(const std::array<double, 4>& q) const {
        auto it = index.find(key(q));
        return it == index.end() ? -1 : it->second;
    }

    static std::array<std::uint64_t, 4> key(const std::array<double, 4>& q) {
        std::array<std::uint64_t, 4> k{};
        std::memcpy(k.data(), q.data(), sizeof(k));
        return k;
    }
};

namespace detail {

inline std::vector<SdpEntry> corner_entries(const Discretization& disc,
                                            const std::array<double, 4>& q) {
    auto vals = covariance_values(q);
    auto pos = covariance_placements(disc, q);
    // Entry convention follows sparse SDPA: the value is the symmetric
    // matrix entry at (row, col) and its mirror. Placements arrive in
    // mirrored pairs with equal values, so folding onto row <= col halves
    // the off-diagonal accumulator.
    std::map<std::tuple<int, int, int>, double> acc;
    for (int s = 0; s < 6; ++s) {
        auto [r, c] = pos[static_cast<std::size_t>(s)];
        if (r > c) std::swap(r, c);
        acc[{1, r, c}] += vals[static_cast<std::size_t>(s)];
        acc[{2, r, c}] += 1.0;
    }
    std::vector<SdpEntry> out;
    for (const auto& [key, v] : acc) {
        auto [blk, r, c] = key;
        double value = (r == c) ? v : v / 2.0;
        if (value != 0.0) out.push_back({blk, r, c, value});
    }
    return out;
}

}  // namespace detail

/// Enumerate all cells of the discretization (ordered edge intervals
/// i <= j <= k, triple-mass sub-intervals per policy), bound delta - cost on
/// each, and register the corner types as SDP variables. Corners shared by
/// several cells keep the representative with the largest bound.
inline SdpModel assemble_matrices(const Discretization& disc, const RuleSet& rules,
                                  const BudgetSpec& budgets, int base_pts = 3,
                                  int workers = 0) {
    disc.validate();
    rules.validate();
    SdpModel model;
    model.disc = disc;
    model.rules_name = rules.name;
    model.alpha = budgets.alpha;
    model.t = disc.t();
    int t = disc.t();

    struct PendingCell {
        int i, j, k, sub;
        Cell box;
        bool degenerate;
        double lo_y, hi_y;  // degenerate pairs only
        double bound = 0.0;
        bool keep = false;
    };
    std::vector<PendingCell> cells;
    for (int i = 0; i < t; ++i)
        for (int j = i; j < t; ++j)
            for (int k = j; k < t; ++k) {
                // Hull of the feasible triple-mass values over the cell;
                // empty means no triangle fits the box at all.
                double lo3 = std::max({0.0, disc.l(j) + disc.l(k) - 1.0,
                                       (disc.l(i) + disc.l(j) + disc.l(k) - 1.5) / 1.5});
                double hi3 = disc.r(i);
                if (lo3 > hi3 + 1e-12) continue;
                lo3 = std::min(lo3, hi3);
                int nsub = disc.triple_subdivisions(i, j);
                for (int sub = 0; sub < nsub; ++sub) {
                    PendingCell pc;
                    pc.i = i;
                    pc.j = j;
                    pc.k = k;
                    pc.sub = sub;
                    pc.degenerate = false;
                    pc.box.lo = {disc.l(i), disc.l(j), disc.l(k),
                                 lo3 + (hi3 - lo3) * sub / nsub};
                    pc.box.hi = {disc.r(i), disc.r(j), disc.r(k),
                                 lo3 + (hi3 - lo3) * (sub + 1) / nsub};
                    cells.push_back(pc);
                }
            }
    for (int i = 0; i < t; ++i) {
        PendingCell pc;
        pc.i = i;
        pc.j = i;
        pc.k = t - 1;
        pc.sub = 0;
        pc.degenerate = true;
        pc.lo_y = disc.l(i);
        pc.hi_y = disc.r(i);
        cells.push_back(pc);
    }

    if (workers <= 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    auto run = [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            auto& pc = cells[c];
            if (pc.degenerate) {
                auto b = d_tilde_degenerate(pc.lo_y, pc.hi_y, rules, budgets);
                if (b) {
                    pc.bound = *b;
                    pc.keep = true;
                }
            } else {
                auto b = d_tilde(pc.box, rules, budgets, base_pts);
                if (b) {
                    pc.bound = *b;
                    pc.keep = true;
                }
            }
        }
    };
    if (workers == 1 || cells.size() < 64) {
        run(0, cells.size());
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (cells.size() + static_cast<std::size_t>(workers) - 1) /
                            static_cast<std::size_t>(workers);
        for (int w = 0; w < workers; ++w) {
            std::size_t b = static_cast<std::size_t>(w) * chunk;
            if (b >= cells.size()) break;
            pool.emplace_back(run, b, std::min(b + chunk, cells.size()));
        }
        for (auto& th : pool) th.join();
    }

    for (const auto& pc : cells) {
        if (!pc.keep) continue;
        CornerSet cs;
        if (pc.degenerate) {
            cs = CornerSet::from_box({pc.lo_y, pc.lo_y, 1.0, pc.lo_y},
                                     {pc.hi_y, pc.hi_y, 1.0, pc.hi_y});
            // The degenerate box is a segment in 4-space: only the two
            // endpoints of the substituted type (y, y, 1, y) are corners.
            cs.corners = {{pc.lo_y, pc.lo_y, 1.0, pc.lo_y}, {pc.hi_y, pc.hi_y, 1.0, pc.hi_y}};
        } else {
            cs = CornerSet::from_box(pc.box.lo, pc.box.hi);
        }
        for (const auto& q : cs.corners) {
            auto key = SdpModel::key(q);
            auto it = model.index.find(key);
            if (it != model.index.end()) {
                // Boundary coalescing: keep the representative with the
                // largest bound (conservative for the minimization).
                auto& var = model.vars[static_cast<std::size_t>(it->second)];
                if (pc.bound > var.obj) {
                    var.obj = pc.bound;
                    var.cell_i = pc.i;
                    var.cell_j = pc.j;
                    var.cell_k = pc.k;
                    var.cell_sub = pc.sub;
                    var.from_degenerate = pc.degenerate;
                }
                continue;
            }
            SdpVariable var;
            var.corner = q;
            var.obj = pc.bound;
            var.entries = detail::corner_entries(disc, q);
            var.cell_i = pc.i;
            var.cell_j = pc.j;
            var.cell_k = pc.k;
            var.cell_sub = pc.sub;
            var.from_degenerate = pc.degenerate;
            model.index.emplace(key, static_cast<int>(model.vars.size()));
            model.vars.push_back(std::move(var));
        }
    }
    if (model.vars.empty()) throw ValidationError("assemble_matrices: no nonempty cells");
    return model;
}

// ---- Evaluation ----------------------------------------------------------

struct EtaReport {
    double objective = 0.0;
    double min_eig_q = 0.0;
    double min_eig_f = 0.0;
    double sum_eta = 0.0;
};

/// Accumulate a variable's symmetric contribution into a dense t x t matrix.
inline void accumulate_entries(const std::vector<SdpEntry>& entries, double weight, int t,
                               std::vector<double>& q, std::vector<double>& f) {
    for (const auto& e : entries) {
        auto& m = (e.block == 1) ? q : f;
        m[static_cast<std::size_t>(e.row) * t + e.col] += weight * e.value;
        if (e.row != e.col) m[static_cast<std::size_t>(e.col) * t + e.row] += weight * e.value;
    }
}

inline EtaReport evaluate_eta(const SdpModel& model, const std::vector<double>& eta) {
    if (eta.size() != model.vars.size())
        throw ValidationError("evaluate_eta: eta size does not match the variable count");
    EtaReport rep;
    int t = model.t;
    std::vector<double> q(static_cast<std::size_t>(t) * t, 0.0);
    std::vector<double> f(static_cast<std::size_t>(t) * t, 0.0);
    for (std::size_t v = 0; v < eta.size(); ++v) {
        if (eta[v] < 0.0)
            throw ValidationError("evaluate_eta: eta[" + std::to_string(v) + "] is negative");
        rep.objective += eta[v] * model.vars[v].obj;
        rep.sum_eta += eta[v];
        accumulate_entries(model.vars[v].entries, eta[v], t, q, f);
    }
    rep.min_eig_q = symmetric_min_eigenvalue(std::move(q), t);
    rep.min_eig_f = symmetric_min_eigenvalue(std::move(f), t);
    return rep;
}

// ---- Census constructions ------------------------------------------------

/// Q(y) built per vertex: for every pivot u and ordered pair of distinct
/// others (v, w), add y_uvw - y_uv * y_uw at (I(y_uv), I(y_uw)).
inline std::vector<double> census_q_by_vertex(const Discretization& disc,
                                              const ClusterLpSolution& sol) {
    int t = disc.t(), n = sol.n;
    std::vector<double> q(static_cast<std::size_t>(t) * t, 0.0);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (v == u) continue;
            for (int w = 0; w < n; ++w) {
                if (w == u || w == v) continue;
                double yuv = sol.y_pair(u, v), yuw = sol.y_pair(u, w);
                q[static_cast<std::size_t>(disc.interval_of(yuv)) * t + disc.interval_of(yuw)] +=
                    sol.y_triple(u, v, w) - yuv * yuw;
            }
        }
    return q;
}

/// The same matrix assembled triangle by triangle through the six
/// covariance placements.
inline std::vector<double> census_q_by_triangle(const Discretization& disc,
                                                const ClusterLpSolution& sol) {
    int t = disc.t(), n = sol.n;
    std::vector<double> q(static_cast<std::size_t>(t) * t, 0.0);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            for (int w = v + 1; w < n; ++w) {
                std::array<double, 4> type{sol.y_pair(u, v), sol.y_pair(u, w), sol.y_pair(v, w),
                                           sol.y_triple(u, v, w)};
                auto vals = covariance_values(type);
                auto pos = covariance_placements(disc, type);
                for (int s = 0; s < 6; ++s)
                    q[static_cast<std::size_t>(pos[static_cast<std::size_t>(s)].first) * t +
                      pos[static_cast<std::size_t>(s)].second] +=
                        vals[static_cast<std::size_t>(s)];
            }
    return q;
}

/// Interval co-occurrence frequencies F(y) = sum_u freq_u^T freq_u, where
/// freq_u histograms {y_uv : v in V} including v = u (mass at I(1)).
inline std::vector<double> census_f(const Discretization& disc, const ClusterLpSolution& sol) {
    int t = disc.t(), n = sol.n;
    std::vector<double> f(static_cast<std::size_t>(t) * t, 0.0);
    for (int u = 0; u < n; ++u) {
        std::vector<double> freq(static_cast<std::size_t>(t), 0.0);
        for (int v = 0; v < n; ++v) freq[static_cast<std::size_t>(disc.interval_of(
            sol.y_pair(u, v)))] += 1.0;
        for (int a = 0; a < t; ++a)
            for (int b = 0; b < t; ++b)
                f[static_cast<std::size_t>(a) * t + b] +=
                    freq[static_cast<std::size_t>(a)] * freq[static_cast<std::size_t>(b)];
    }
    return f;
}

/// Distribute an LP solution's triangle census onto the model's corner
/// types via the convex-weight operator: distinct triples to their cells,
/// pairs to the degenerate types, plus n/6 units on the type (1,1,1,1)
/// (whose six placements supply the diagonal frequency mass at I(1)).
inline std::vector<double> eta_from_census(const SdpModel& model, const ClusterLpSolution& sol) {
    const auto& disc = model.disc;
    std::vector<double> eta(model.vars.size(), 0.0);
    auto add_box = [&](const std::array<double, 4>& lo, const std::array<double, 4>& hi,
                       const std::array<double, 4>& q, double mass) {
        auto cs = CornerSet::from_box(lo, hi);
        auto w = cs.weights_for(q);
        for (std::size_t c = 0; c < cs.corners.size(); ++c) {
            if (w[c] <= 0.0) continue;
            int idx = model.find(cs.corners[c]);
            if (idx < 0)
                throw ValidationError("eta_from_census: corner type missing from the model");
            eta[static_cast<std::size_t>(idx)] += mass * w[c];
        }
    };
    int n = sol.n;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            for (int w = v + 1; w < n; ++w) {
                std::array<double, 3> ys{sol.y_pair(u, v), sol.y_pair(u, w), sol.y_pair(v, w)};
                std::sort(ys.begin(), ys.end());
                double y3 = sol.y_triple(u, v, w);
                int i = disc.interval_of(ys[0]);
                int j = disc.interval_of(ys[1]);
                int k = disc.interval_of(ys[2]);
                double lo3 = std::max({0.0, disc.l(j) + disc.l(k) - 1.0,
                                       (disc.l(i) + disc.l(j) + disc.l(k) - 1.5) / 1.5});
                double hi3 = disc.r(i);
                int nsub = disc.triple_subdivisions(i, j);
                int sub = 0;
                if (hi3 > lo3)
                    sub = std::min(nsub - 1,
                                   std::max(0, static_cast<int>((y3 - lo3) / (hi3 - lo3) * nsub)));
                std::array<double, 4> lo{disc.l(i), disc.l(j), disc.l(k),
                                         lo3 + (hi3 - lo3) * sub / nsub};
                std::array<double, 4> hi{disc.r(i), disc.r(j), disc.r(k),
                                         lo3 + (hi3 - lo3) * (sub + 1) / nsub};
                add_box(lo, hi, {ys[0], ys[1], ys[2], std::clamp(y3, lo[3], hi[3])}, 1.0);
            }
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            double y = sol.y_pair(u, v);
            int i = disc.interval_of(y);
            double lo = disc.l(i), hi = disc.r(i);
            double frac = (y - lo) / (hi - lo);
            for (auto [val, mass] : {std::pair{lo, 1.0 - frac}, std::pair{hi, frac}}) {
                if (mass <= 0.0) continue;
                int idx = model.find({val, val, 1.0, val});
                if (idx < 0)
                    throw ValidationError("eta_from_census: degenerate type missing");
                eta[static_cast<std::size_t>(idx)] += mass;
            }
        }
    int top = model.find({1.0, 1.0, 1.0, 1.0});
    if (top < 0) throw ValidationError("eta_from_census: unit type missing");
    eta[static_cast<std::size_t>(top)] += n / 6.0;
    return eta;
}

// ---- SDPA sparse emission ------------------------------------------------

struct SdpaFile {
    int m = 0;
    std::vector<int> block_struct;
    std::vector<double> c;
    // (matno, blkno, i, j, value), all 1-based, i <= j.
    std::vector<std::tuple<int, int, int, int, double>> entries;

    bool operator==(const SdpaFile&) const = default;
};

namespace detail {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

inline SdpaFile sdpa_contents(const SdpModel& model) {
    if (model.vars.empty()) throw ValidationError("sdpa_contents: empty model");
    SdpaFile file;
    int m = static_cast<int>(model.vars.size());
    file.m = m;
    // Diagonal LP block: eta >= 0, then the two halves of sum eta = 1.
    file.block_struct = {model.t, model.t, -(m + 2)};
    for (const auto& var : model.vars) file.c.push_back(var.obj);
    // F_0 right-hand side: sum eta >= 1 and -(sum eta) >= -1.
    file.entries.emplace_back(0, 3, m + 1, m + 1, 1.0);
    file.entries.emplace_back(0, 3, m + 2, m + 2, -1.0);
    for (int v = 0; v < m; ++v) {
        for (const auto& e : model.vars[static_cast<std::size_t>(v)].entries)
            file.entries.emplace_back(v + 1, e.block, e.row + 1, e.col + 1, e.value);
        file.entries.emplace_back(v + 1, 3, v + 1, v + 1, 1.0);
        file.entries.emplace_back(v + 1, 3, m + 1, m + 1, 1.0);
        file.entries.emplace_back(v + 1, 3, m + 2, m + 2, -1.0);
    }
    return file;
}

inline void emit_sdpa(const SdpModel& model, const std::string& path) {
    auto file = sdpa_contents(model);
    std::ofstream out(path);
    if (!out) throw ValidationError("emit_sdpa: cannot open " + path);
    out << file.m << "\n";
    out << file.block_struct.size() << "\n";
    for (std::size_t b = 0; b < file.block_struct.size(); ++b)
        out << file.block_struct[b] << (b + 1 < file.block_struct.size() ? ' ' : '\n');
    for (std::size_t i = 0; i < file.c.size(); ++i)
        out << detail::format_double(file.c[i]) << (i + 1 < file.c.size() ? ' ' : '\n');
    for (const auto& [matno, blkno, i, j, v] : file.entries)
        out << matno << ' ' << blkno << ' ' << i << ' ' << j << ' ' << detail::format_double(v)
            << "\n";
    if (!out) throw ValidationError("emit_sdpa: write failure on " + path);

    // Sidecar index: which (cell, corner) each eta component refers to.
    nlohmann::json idx;
    idx["schema_version"] = 1;
    idx["alpha"] = model.alpha;
    idx["rules"] = model.rules_name;
    idx["breakpoints"] = model.disc.breakpoints;
    auto& vars = idx["variables"] = nlohmann::json::array();
    for (const auto& var : model.vars)
        vars.push_back({{"corner", var.corner},
                        {"objective", var.obj},
                        {"cell", {var.cell_i, var.cell_j, var.cell_k, var.cell_sub}},
                        {"degenerate_pair", var.from_degenerate}});
    std::ofstream side(path + ".index.json");
    if (!side) throw ValidationError("emit_sdpa: cannot open " + path + ".index.json");
    side << idx.dump(2) << "\n";
}

inline SdpaFile read_sdpa(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("read_sdpa: cannot open " + path);
    SdpaFile file;
    int nblock = 0;
    if (!(in >> file.m >> nblock)) throw ParseError("read_sdpa: bad header");
    file.block_struct.resize(static_cast<std::size_t>(nblock));
    for (auto& b : file.block_struct)
        if (!(in >> b)) throw ParseError("read_sdpa: bad block structure");
    file.c.resize(static_cast<std::size_t>(file.m));
    for (auto& c : file.c)
        if (!(in >> c)) throw ParseError("read_sdpa: bad objective row");
    int matno, blkno, i, j;
    double v;
    while (in >> matno >> blkno >> i >> j >> v) file.entries.emplace_back(matno, blkno, i, j, v);
    return file;
}

}  // namespace cclp
