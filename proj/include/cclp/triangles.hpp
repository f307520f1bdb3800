#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cclp/rounding.hpp"

namespace cclp {

/// Per-edge charging budgets. The constant blows up as alpha -> 2, hence the
/// half-open domain.
struct BudgetSpec {
    double alpha = 1.56;
    double c_alpha = 0.0;

    explicit BudgetSpec(double a) : alpha(a) {
        if (!(a >= 1.0 && a < 2.0))
            throw ValidationError("BudgetSpec: alpha must lie in [1, 2)");
        c_alpha = a / (1.0 - a / 2.0);
    }

    double plus(double x) const {
        check(x);
        return c_alpha * x * x / (1.0 + x);
    }
    double minus(double x) const {
        check(x);
        return c_alpha * (1.0 + 2.0 * x) * (1.0 - x) / (2.0 * (1.0 + x));
    }
    double edge(char sign, double x) const { return sign == '+' ? plus(x) : minus(x); }

  private:
    static void check(double x) {
        if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("BudgetSpec: x must lie in [0, 1]");
    }
};

inline double budget_plus(double alpha, double x) { return BudgetSpec(alpha).plus(x); }
inline double budget_minus(double alpha, double x) { return BudgetSpec(alpha).minus(x); }

/// A signed triangle described by its co-clustering statistics, or a single
/// signed pair ("degenerate triangle") in the two-vertex charging scheme.
/// Edge order for `signs`: (u,v), (u,w), (v,w).
struct TriangleProfile {
    bool degenerate = false;
    std::array<char, 3> signs{'+', '+', '+'};
    double y_uv = 0.0, y_uw = 0.0, y_vw = 0.0, y_uvw = 0.0;

    static TriangleProfile full(char s_uv, char s_uw, char s_vw, double y_uv, double y_uw,
                                double y_vw, double y_uvw) {
        TriangleProfile t;
        t.signs = {s_uv, s_uw, s_vw};
        t.y_uv = y_uv;
        t.y_uw = y_uw;
        t.y_vw = y_vw;
        t.y_uvw = y_uvw;
        return t;
    }

    static TriangleProfile degen(char sign, double y) {
        TriangleProfile t;
        t.degenerate = true;
        t.signs = {sign, sign, '+'};
        t.y_uv = y;
        return t;
    }

    /// The two-vertex pair viewed as a proper triangle with a duplicated
    /// endpoint: y values (y, y, 1, y), third edge +.
    TriangleProfile substituted() const {
        if (!degenerate) throw ValidationError("substituted: profile is not degenerate");
        return full(signs[0], signs[0], '+', y_uv, y_uv, 1.0, y_uv);
    }
};

inline bool is_feasible(const TriangleProfile& t, double tol = 1e-9) {
    auto in01 = [&](double v) { return v >= -tol && v <= 1.0 + tol; };
    if (t.degenerate) return in01(t.y_uv);
    if (!(in01(t.y_uv) && in01(t.y_uw) && in01(t.y_vw) && in01(t.y_uvw))) return false;
    double a = t.y_uv, b = t.y_uw, c = t.y_vw, d = t.y_uvw;
    // Triple mass below every pairwise mass; pairwise sums can exceed 1 only
    // via the shared triple mass.
    if (d > std::min({a, b, c}) + tol) return false;
    if (a + b - d > 1.0 + tol) return false;
    if (a + c - d > 1.0 + tol) return false;
    if (b + c - d > 1.0 + tol) return false;
    // Triangle inequality on the distances x = 1 - y (implied by the above,
    // kept explicit for clarity).
    double xa = 1.0 - a, xb = 1.0 - b, xc = 1.0 - c;
    if (xa > xb + xc + tol || xb > xa + xc + tol || xc > xa + xb + tol) return false;
    // Three-way sandwich between the triple mass and the pairwise sum.
    double sum = a + b + c;
    if (3.0 * d > sum + tol) return false;
    if (sum > 1.5 + 1.5 * d + tol) return false;
    return true;
}

/// Feasible interval for y_uvw given the three pairwise masses, or nullopt.
inline std::optional<std::pair<double, double>> triple_mass_range(double y_uv, double y_uw,
                                                                  double y_vw,
                                                                  double tol = 1e-9) {
    double sum = y_uv + y_uw + y_vw;
    double lo = std::max({0.0, y_uv + y_uw - 1.0, y_uv + y_vw - 1.0, y_uw + y_vw - 1.0,
                          (sum - 1.5) / 1.5});
    double hi = std::min({y_uv, y_uw, y_vw});
    if (lo > hi + tol) return std::nullopt;
    return std::make_pair(lo, std::min(hi, std::max(lo, hi)));
}

struct CostDelta {
    double cost = 0.0;
    double delta = 0.0;
    double margin() const { return delta - cost; }
};

namespace detail {

// Pr[v joins the pivot's cluster] across an edge with sign `sign` and
// co-clustering mass y. Dependent and independent long +edges coincide
// numerically (both y); they differ only in the joint law.
inline double join_prob(const RuleSet& rules, char sign, double y) {
    double x = 1.0 - y;
    if (sign == '+') return rules.is_short_plus(x) ? 1.0 : y;
    return rules.minus_join(x);
}

inline bool dependent_plus(const RuleSet& rules, char sign, double y) {
    return sign == '+' && rules.is_dependent_plus(1.0 - y);
}

// One pivot's contribution. Edges (sign1, y1) and (sign2, y2) run from the
// pivot to the pair (sp, yp); y3 is the triple mass.
inline void accumulate_pivot(const RuleSet& rules, const BudgetSpec& budgets, char sign1,
                             double y1, char sign2, double y2, char sp, double yp, double y3,
                             CostDelta& out) {
    double p1 = join_prob(rules, sign1, y1);
    double p2 = join_prob(rules, sign2, y2);
    double joint = (dependent_plus(rules, sign1, y1) && dependent_plus(rules, sign2, y2))
                       ? y3
                       : p1 * p2;
    out.cost += (sp == '+') ? p1 + p2 - 2.0 * joint : joint;
    out.delta += (p1 + p2 - joint) * budgets.edge(sp, 1.0 - yp);
}

}  // namespace detail

/// Closed-form rounding cost and budget charge of a triangle, summed over its
/// pivots. For degenerate profiles the pivot is always one of the two
/// endpoints, so the charge is the full budget twice.
inline CostDelta cost_and_delta(const TriangleProfile& t, const RuleSet& rules,
                                const BudgetSpec& budgets) {
    rules.validate();
    if (!is_feasible(t)) throw ValidationError("cost_and_delta: infeasible triangle profile");
    CostDelta out;
    if (t.degenerate) {
        double p = detail::join_prob(rules, t.signs[0], t.y_uv);
        out.cost = (t.signs[0] == '+') ? 2.0 * (1.0 - p) : 2.0 * p;
        out.delta = 2.0 * budgets.edge(t.signs[0], 1.0 - t.y_uv);
        return out;
    }
    auto [s_uv, s_uw, s_vw] = t.signs;
    // Pivot u sees edges uv, uw and charges the pair vw; likewise rotated.
    detail::accumulate_pivot(rules, budgets, s_uv, t.y_uv, s_uw, t.y_uw, s_vw, t.y_vw, t.y_uvw,
                             out);
    detail::accumulate_pivot(rules, budgets, s_uv, t.y_uv, s_vw, t.y_vw, s_uw, t.y_uw, t.y_uvw,
                             out);
    detail::accumulate_pivot(rules, budgets, s_uw, t.y_uw, s_vw, t.y_vw, s_uv, t.y_uv, t.y_uvw,
                             out);
    return out;
}

// ---- Grid verification --------------------------------------------------

struct GridReport {
    double min_margin = std::numeric_limits<double>::infinity();
    TriangleProfile argmin;
    long evaluated = 0;
    long violations = 0;  // margin < -1e-9
};

namespace detail {

inline void grid_consider(GridReport& rep, const TriangleProfile& t, const RuleSet& rules,
                          const BudgetSpec& budgets) {
    double m = cost_and_delta(t, rules, budgets).margin();
    ++rep.evaluated;
    if (m < -1e-9) ++rep.violations;
    if (m < rep.min_margin) {
        rep.min_margin = m;
        rep.argmin = t;
    }
}

}  // namespace detail

/// Exhaustive sweep of all sign patterns over a feasible grid of
/// (y_uv, y_uw, y_vw, y_uvw), reporting the worst delta - cost margin.
inline GridReport verify_triangle_budgets(const BudgetSpec& budgets, const RuleSet& rules,
                                          double step = 0.02, bool include_full = true,
                                          bool include_degenerate = true) {
    if (!(step > 0.0 && step <= 0.5))
        throw ValidationError("verify_triangle_budgets: step must lie in (0, 0.5]");
    GridReport rep;
    int m = static_cast<int>(std::lround(1.0 / step));
    auto grid = [&](int i) { return std::min(1.0, i * step); };
    const std::array<char, 2> signs{'+', '-'};
    if (include_degenerate)
        for (char s : signs)
            for (int i = 0; i <= m; ++i)
                detail::grid_consider(rep, TriangleProfile::degen(s, grid(i)), rules, budgets);
    if (!include_full) return rep;
    for (char s_uv : signs)
        for (char s_uw : signs)
            for (char s_vw : signs)
                for (int i = 0; i <= m; ++i)
                    for (int j = 0; j <= m; ++j)
                        for (int k = 0; k <= m; ++k) {
                            double a = grid(i), b = grid(j), c = grid(k);
                            auto range = triple_mass_range(a, b, c);
                            if (!range) continue;
                            auto [lo, hi] = *range;
                            // Walk y_uvw at the same step, pinning both ends.
                            detail::grid_consider(
                                rep, TriangleProfile::full(s_uv, s_uw, s_vw, a, b, c, lo), rules,
                                budgets);
                            for (int l = static_cast<int>(std::ceil(lo / step)); grid(l) < hi;
                                 ++l) {
                                if (grid(l) <= lo) continue;
                                detail::grid_consider(
                                    rep,
                                    TriangleProfile::full(s_uv, s_uw, s_vw, a, b, c, grid(l)),
                                    rules, budgets);
                            }
                            if (hi > lo)
                                detail::grid_consider(
                                    rep, TriangleProfile::full(s_uv, s_uw, s_vw, a, b, c, hi),
                                    rules, budgets);
                        }
    return rep;
}

// ---- Cell minimization (for the factor-revealing program) ---------------

/// Axis-aligned box of y statistics; coordinates order (y_uv, y_uw, y_vw,
/// y_uvw).
struct Cell {
    std::array<double, 4> lo{0, 0, 0, 0};
    std::array<double, 4> hi{0, 0, 0, 0};
};

namespace detail {

// Forced rule classes: within a cell an edge's class can straddle a
// threshold (the join probability even jumps at the short/long boundary),
// so the minimizer evaluates each possible class branch separately. Every
// branch function is smooth on the cell and extends the true margin, which
// keeps the Lipschitz certification valid per branch.
enum class EdgeClass { Short, Dependent, Independent, Minus };

inline double branch_join_prob(const RuleSet& rules, EdgeClass cls, double y) {
    switch (cls) {
        case EdgeClass::Short: return 1.0;
        case EdgeClass::Dependent:
        case EdgeClass::Independent: return y;
        case EdgeClass::Minus: return rules.minus_join(1.0 - y);
    }
    return 0.0;
}

inline double branch_margin(const RuleSet& rules, const BudgetSpec& budgets,
                            const std::array<char, 3>& signs, const std::array<EdgeClass, 3>& cls,
                            const std::array<double, 4>& q) {
    // Pivot p sees edges e1, e2 and charges pair e3 (indices into signs/q).
    static constexpr int kPivots[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
    double cost = 0.0, delta = 0.0;
    for (const auto& pv : kPivots) {
        int e1 = pv[0], e2 = pv[1], e3 = pv[2];
        double p1 = branch_join_prob(rules, cls[e1], q[e1]);
        double p2 = branch_join_prob(rules, cls[e2], q[e2]);
        double joint =
            (cls[e1] == EdgeClass::Dependent && cls[e2] == EdgeClass::Dependent) ? q[3] : p1 * p2;
        cost += (signs[e3] == '+') ? p1 + p2 - 2.0 * joint : joint;
        delta += (p1 + p2 - joint) * budgets.edge(signs[e3], 1.0 - q[e3]);
    }
    return delta - cost;
}

// Possible classes of one edge over a y-range.
inline std::vector<EdgeClass> edge_classes(const RuleSet& rules, char sign, double y_lo,
                                           double y_hi) {
    if (sign == '-') return {EdgeClass::Minus};
    double x_lo = 1.0 - y_hi, x_hi = 1.0 - y_lo;
    std::vector<EdgeClass> out;
    if (x_lo <= rules.tau1) out.push_back(EdgeClass::Short);
    if (x_hi > rules.tau1 && x_lo <= rules.tau2) out.push_back(EdgeClass::Dependent);
    if (x_hi > rules.tau2) out.push_back(EdgeClass::Independent);
    return out;
}

// max of |budget'| over [0, x]; both derivatives share the same magnitude
// C * x(x+2)/(1+x)^2, increasing in x.
inline double budget_slope(const BudgetSpec& budgets, double x) {
    return budgets.c_alpha * x * (x + 2.0) / ((1.0 + x) * (1.0 + x));
}

// Per-coordinate slope bounds of branch_margin over the cell, for the
// Lipschitz slack. Conservative but cell-local.
inline std::array<double, 4> branch_slopes(const RuleSet& rules, const BudgetSpec& budgets,
                                           const std::array<char, 3>& signs,
                                           const std::array<EdgeClass, 3>& cls, const Cell& cell) {
    std::array<double, 2> prange[3];
    double pslope[3];
    for (int e = 0; e < 3; ++e) {
        double ylo = cell.lo[e], yhi = cell.hi[e];
        switch (cls[e]) {
            case EdgeClass::Short:
                prange[e] = {1.0, 1.0};
                pslope[e] = 0.0;
                break;
            case EdgeClass::Dependent:
            case EdgeClass::Independent:
                prange[e] = {ylo, yhi};
                pslope[e] = 1.0;
                break;
            case EdgeClass::Minus:
                if (rules.minus_quadratic) {
                    prange[e] = {1.0 - (1.0 - ylo) * (1.0 - ylo),
                                 1.0 - (1.0 - yhi) * (1.0 - yhi)};
                    pslope[e] = 2.0 * (1.0 - ylo);
                } else {
                    prange[e] = {ylo, yhi};
                    pslope[e] = 1.0;
                }
                break;
        }
    }
    // Budget value/derivative bounds per pair coordinate.
    double bmax[3], bdmax[3];
    for (int e = 0; e < 3; ++e) {
        double x_hi = 1.0 - cell.lo[e], x_lo = 1.0 - cell.hi[e];
        bmax[e] = (signs[e] == '+') ? budgets.plus(x_hi) : budgets.minus(x_lo);
        bdmax[e] = budget_slope(budgets, x_hi);
    }
    static constexpr int kPivots[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
    std::array<double, 4> slopes{0.0, 0.0, 0.0, 0.0};
    for (const auto& pv : kPivots) {
        int e1 = pv[0], e2 = pv[1], e3 = pv[2];
        bool dep_joint =
            cls[e1] == EdgeClass::Dependent && cls[e2] == EdgeClass::Dependent;
        for (auto [a, b] : {std::pair{e1, e2}, std::pair{e2, e1}}) {
            // d margin / d p_a, with partner p_b.
            double cost_dp, delta_dp;
            if (dep_joint) {
                cost_dp = 1.0;
                delta_dp = 1.0;
            } else if (signs[e3] == '+') {
                cost_dp = std::max(std::abs(1.0 - 2.0 * prange[b][0]),
                                   std::abs(1.0 - 2.0 * prange[b][1]));
                delta_dp = 1.0 - prange[b][0];
            } else {
                cost_dp = prange[b][1];
                delta_dp = 1.0 - prange[b][0];
            }
            slopes[static_cast<std::size_t>(a)] +=
                pslope[a] * (cost_dp + delta_dp * bmax[e3]);
        }
        // Pair coordinate: only delta depends on y_e3, through the budget.
        double joint_lo = dep_joint ? cell.lo[3] : prange[e1][0] * prange[e2][0];
        double kappa = std::max(0.0, prange[e1][1] + prange[e2][1] - joint_lo);
        slopes[static_cast<std::size_t>(e3)] += kappa * bdmax[e3];
        if (dep_joint) slopes[3] += (signs[e3] == '+' ? 2.0 : 1.0) + bmax[e3];
    }
    return slopes;
}

// Interval upper bound on branch cost over the cell.
inline double branch_cost_max(const RuleSet& rules, const std::array<char, 3>& signs,
                              const std::array<EdgeClass, 3>& cls, const Cell& cell) {
    std::array<double, 2> prange[3];
    for (int e = 0; e < 3; ++e) {
        double ylo = cell.lo[e], yhi = cell.hi[e];
        switch (cls[e]) {
            case EdgeClass::Short: prange[e] = {1.0, 1.0}; break;
            case EdgeClass::Dependent:
            case EdgeClass::Independent: prange[e] = {ylo, yhi}; break;
            case EdgeClass::Minus:
                prange[e] = rules.minus_quadratic
                                ? std::array<double, 2>{1.0 - (1.0 - ylo) * (1.0 - ylo),
                                                        1.0 - (1.0 - yhi) * (1.0 - yhi)}
                                : std::array<double, 2>{ylo, yhi};
                break;
        }
    }
    static constexpr int kPivots[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
    double total = 0.0;
    for (const auto& pv : kPivots) {
        int e1 = pv[0], e2 = pv[1], e3 = pv[2];
        bool dep = cls[e1] == EdgeClass::Dependent && cls[e2] == EdgeClass::Dependent;
        double joint_lo = dep ? cell.lo[3] : prange[e1][0] * prange[e2][0];
        double joint_hi = dep ? cell.hi[3] : prange[e1][1] * prange[e2][1];
        total += (signs[e3] == '+')
                     ? std::max(0.0, prange[e1][1] + prange[e2][1] - 2.0 * joint_lo)
                     : joint_hi;
    }
    return total;
}

}  // namespace detail

/// Certified lower bound on delta - cost over every feasible triangle in the
/// cell (all sign patterns unless `only_signs` restricts to one), or nullopt
/// when the cell contains no feasible triangle. Per sign pattern and rule-
/// class branch: grid scan + coordinate descent, then a cell-local Lipschitz
/// slack built from the branch's slope bounds.
inline std::optional<double> d_tilde(const Cell& cell, const RuleSet& rules,
                                     const BudgetSpec& budgets, int base_pts = 3,
                                     const std::array<char, 3>* only_signs = nullptr) {
    rules.validate();
    base_pts = std::max(base_pts, 2);
    for (int i = 0; i < 4; ++i)
        if (!(cell.lo[i] <= cell.hi[i] && cell.lo[i] >= -1e-12 && cell.hi[i] <= 1.0 + 1e-12))
            throw ValidationError("d_tilde: malformed cell");

    // Feasible grid points (sign independent). y_uvw is clipped per point to
    // its feasible interval intersected with the cell's box.
    std::vector<std::array<double, 4>> points;
    auto coord = [&](int i, int k) {
        return cell.lo[i] + (cell.hi[i] - cell.lo[i]) * k / (base_pts - 1);
    };
    for (int i = 0; i < base_pts; ++i)
        for (int j = 0; j < base_pts; ++j)
            for (int k = 0; k < base_pts; ++k) {
                double yuv = coord(0, i), yuw = coord(1, j), yvw = coord(2, k);
                auto range = triple_mass_range(yuv, yuw, yvw);
                if (!range) continue;
                double lo = std::max(range->first, cell.lo[3]);
                double hi = std::min(range->second, cell.hi[3]);
                if (lo > hi + 1e-12) {
                    // Box and feasible range are disjoint at this grid point,
                    // but a nearby feasible triangle may still live in the
                    // cell (the range shifts with the pairwise coordinates);
                    // probe the nearest feasible value. The y_uvw slack below
                    // is widened to cover this shift.
                    double q3 = (cell.lo[3] > range->second) ? range->second : range->first;
                    points.push_back({yuv, yuw, yvw, q3});
                    continue;
                }
                hi = std::max(hi, lo);
                for (int l = 0; l < base_pts; ++l)
                    points.push_back({yuv, yuw, yvw, lo + (hi - lo) * l / (base_pts - 1)});
            }
    if (points.empty()) return std::nullopt;

    std::vector<std::array<char, 3>> patterns;
    if (only_signs) {
        patterns.push_back(*only_signs);
    } else {
        for (char a : {'+', '-'})
            for (char b : {'+', '-'})
                for (char c : {'+', '-'}) patterns.push_back({a, b, c});
    }

    double bound = std::numeric_limits<double>::infinity();
    for (const auto& signs : patterns) {
        // Enumerate class branches per + edge (usually a single combination).
        std::array<std::vector<detail::EdgeClass>, 3> options;
        for (int e = 0; e < 3; ++e)
            options[static_cast<std::size_t>(e)] =
                detail::edge_classes(rules, signs[static_cast<std::size_t>(e)], cell.lo[e],
                                     cell.hi[e]);
        for (const auto& c0 : options[0])
            for (const auto& c1 : options[1])
                for (const auto& c2 : options[2]) {
                    std::array<detail::EdgeClass, 3> cls{c0, c1, c2};
                    double best = std::numeric_limits<double>::infinity();
                    std::array<double, 4> argmin{};
                    for (const auto& q : points) {
                        double m = detail::branch_margin(rules, budgets, signs, cls, q);
                        if (m < best) {
                            best = m;
                            argmin = q;
                        }
                    }
                    // Coordinate descent with shrinking radius, staying in
                    // the cell box (branch functions need no feasibility).
                    double radius = 0.0;
                    for (int i = 0; i < 4; ++i)
                        radius = std::max(radius, (cell.hi[i] - cell.lo[i]) / (base_pts - 1));
                    for (int round = 0; round < 24 && radius > 1e-7; ++round) {
                        bool moved = false;
                        for (int i = 0; i < 4; ++i)
                            for (double dir : {-radius, radius}) {
                                auto q = argmin;
                                q[i] = std::clamp(q[i] + dir, cell.lo[i], cell.hi[i]);
                                double m = detail::branch_margin(rules, budgets, signs, cls, q);
                                if (m < best) {
                                    best = m;
                                    argmin = q;
                                    moved = true;
                                }
                            }
                        if (!moved) radius /= 2.0;
                    }
                    auto slopes = detail::branch_slopes(rules, budgets, signs, cls, cell);
                    double pair_half = 0.0, slack = 0.0;
                    for (int i = 0; i < 3; ++i) {
                        double h = (cell.hi[i] - cell.lo[i]) / (base_pts - 1) / 2.0;
                        pair_half += h;
                        slack += slopes[i] * h;
                    }
                    // The feasible y_uvw window moves with slope <= 1 in each
                    // pairwise coordinate, hence the widened radius.
                    slack += slopes[3] *
                             ((cell.hi[3] - cell.lo[3]) / (base_pts - 1) / 2.0 + pair_half);
                    // Structural floor: delta >= 0 everywhere, so the margin
                    // is at least -max(cost), by interval arithmetic on the
                    // join probabilities. This makes branches with cost
                    // identically zero certify d_tilde >= 0 exactly.
                    double cost_max = detail::branch_cost_max(rules, signs, cls, cell);
                    bound = std::min(bound, std::max(best - slack, -cost_max));
                }
    }
    return bound;
}

/// Degenerate counterpart: lower bound on delta - cost over both signs and
/// y in [lo, hi], via the substituted triangle (which never beats the direct
/// pair value, so it is the conservative choice).
inline std::optional<double> d_tilde_degenerate(double lo, double hi, const RuleSet& rules,
                                                const BudgetSpec& budgets, int pts = 9) {
    if (!(0.0 <= lo && lo <= hi && hi <= 1.0))
        throw ValidationError("d_tilde_degenerate: malformed interval");
    pts = std::max(pts, 2);
    double best = std::numeric_limits<double>::infinity();
    for (char s : {'+', '-'})
        for (int i = 0; i < pts; ++i) {
            double y = lo + (hi - lo) * i / (pts - 1);
            auto direct = cost_and_delta(TriangleProfile::degen(s, y), rules, budgets);
            auto sub = cost_and_delta(TriangleProfile::degen(s, y).substituted(), rules, budgets);
            best = std::min({best, direct.margin(), sub.margin()});
        }
    // Same slack logic as d_tilde, one coordinate, slope from the pair
    // formulas: |d cost/dy| <= 4, |d delta/dy| <= 2 * 0.75 C.
    double slack = (4.0 + 1.5 * budgets.c_alpha) * (hi - lo) / (pts - 1) / 2.0;
    return best - slack;
}

// ---- Monte Carlo oracle --------------------------------------------------

struct SimulatedCostDelta {
    double cost = 0.0;
    double delta = 0.0;
    double cost_se = 0.0;
    double delta_se = 0.0;
};

/// Embed a feasible triangle in a 3-vertex fractional solution and simulate
/// one pivot iteration per pivot, `trials` times. Every feasible profile is
/// embeddable: the singleton masses 1 - y_ab - y_ac + y_uvw are exactly the
/// rotation feasibility constraints.
inline SimulatedCostDelta simulate_cost_delta(const TriangleProfile& t, const RuleSet& rules,
                                              const BudgetSpec& budgets, long trials,
                                              std::uint64_t seed) {
    rules.validate();
    if (!is_feasible(t)) throw ValidationError("simulate_cost_delta: infeasible profile");
    if (trials <= 0) throw ValidationError("simulate_cost_delta: trials must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SimulatedCostDelta out;

    if (t.degenerate) {
        double p = detail::join_prob(rules, t.signs[0], t.y_uv);
        long bad = 0;
        for (long i = 0; i < 2 * trials; ++i) {
            bool in = unif(rng) < p;
            if ((t.signs[0] == '+') != in) ++bad;
        }
        double f = static_cast<double>(bad) / trials;  // summed over both pivots
        out.cost = f;
        out.cost_se = 2.0 * std::sqrt(std::max(f / 2.0 * (1.0 - f / 2.0), 1e-12) / (2 * trials));
        out.delta = 2.0 * budgets.edge(t.signs[0], 1.0 - t.y_uv);  // pivot always hits the pair
        return out;
    }

    // Cluster mass over subsets of {u, v, w}; bit i = vertex i.
    std::array<double, 8> z{};
    z[7] = t.y_uvw;
    z[3] = t.y_uv - t.y_uvw;
    z[5] = t.y_uw - t.y_uvw;
    z[6] = t.y_vw - t.y_uvw;
    z[1] = 1.0 - t.y_uv - t.y_uw + t.y_uvw;
    z[2] = 1.0 - t.y_uv - t.y_vw + t.y_uvw;
    z[4] = 1.0 - t.y_uw - t.y_vw + t.y_uvw;
    for (double& v : z) v = std::max(v, 0.0);

    auto [s_uv, s_uw, s_vw] = t.signs;
    struct PivotView {
        int pivot, v1, v2;
        char e1, e2, pair;
        double y1, y2, ypair;
    };
    const std::array<PivotView, 3> views{{{0, 1, 2, s_uv, s_uw, s_vw, t.y_uv, t.y_uw, t.y_vw},
                                          {1, 0, 2, s_uv, s_vw, s_uw, t.y_uv, t.y_vw, t.y_uw},
                                          {2, 0, 1, s_uw, s_vw, s_uv, t.y_uw, t.y_vw, t.y_uv}}};
    double cost_var = 0.0, delta_var = 0.0;
    for (const auto& view : views) {
        // Conditional alias table over sets containing the pivot.
        std::vector<int> masks;
        std::vector<double> w;
        for (int m = 1; m < 8; ++m)
            if ((m >> view.pivot & 1) && z[static_cast<std::size_t>(m)] > 0.0) {
                masks.push_back(m);
                w.push_back(z[static_cast<std::size_t>(m)]);
            }
        detail::AliasTable table(w);
        auto member = [&](int v, char sign, double y, int mask) {
            double x = 1.0 - y;
            if (sign == '+') {
                if (rules.is_short_plus(x)) return true;
                if (rules.is_dependent_plus(x)) return (mask >> v & 1) != 0;
                return unif(rng) < 1.0 - x;
            }
            return unif(rng) < rules.minus_join(x);
        };
        long cost_hits = 0, touch_hits = 0;
        for (long i = 0; i < trials; ++i) {
            int mask = masks[table.sample(rng)];
            bool in1 = member(view.v1, view.e1, view.y1, mask);
            bool in2 = member(view.v2, view.e2, view.y2, mask);
            if (view.pair == '+' ? in1 != in2 : in1 && in2) ++cost_hits;
            if (in1 || in2) ++touch_hits;
        }
        double pc = static_cast<double>(cost_hits) / trials;
        double pt = static_cast<double>(touch_hits) / trials;
        double b = budgets.edge(view.pair, 1.0 - view.ypair);
        out.cost += pc;
        out.delta += pt * b;
        cost_var += std::max(pc * (1.0 - pc), 1e-12) / trials;
        delta_var += b * b * std::max(pt * (1.0 - pt), 1e-12) / trials;
    }
    out.cost_se = std::sqrt(cost_var);
    out.delta_se = std::sqrt(delta_var);
    return out;
}

/// Draw a random feasible TriangleProfile (uniform signs, rejection-sampled
/// y statistics).
inline TriangleProfile random_feasible_profile(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const char sgn[2] = {'+', '-'};
    for (;;) {
        double a = unif(rng), b = unif(rng), c = unif(rng);
        auto range = triple_mass_range(a, b, c);
        if (!range) continue;
        double d = range->first + (range->second - range->first) * unif(rng);
        auto t = TriangleProfile::full(sgn[rng() & 1], sgn[rng() & 1], sgn[rng() & 1], a, b, c, d);
        if (is_feasible(t)) return t;
    }
}

}  // namespace cclp
