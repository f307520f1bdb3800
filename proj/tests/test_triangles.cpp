#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cclp/triangles.hpp"

using namespace cclp;

TEST_CASE("budget formulas") {
    BudgetSpec b(1.56);
    CHECK(b.c_alpha == doctest::Approx(1.56 / 0.22));
    CHECK(b.plus(0.0) == 0.0);
    CHECK(b.minus(1.0) == 0.0);
    CHECK(b.plus(0.4) == doctest::Approx(0.810390).epsilon(1e-5));
    CHECK(budget_plus(1.56, 0.4) == doctest::Approx((1.56 / 0.22) * (0.16 / 1.4)));

    CHECK_THROWS_AS(BudgetSpec(0.99), ValidationError);
    CHECK_THROWS_AS(BudgetSpec(2.0), ValidationError);
    CHECK_THROWS_AS(b.plus(-0.1), ValidationError);
    CHECK_THROWS_AS(b.minus(1.1), ValidationError);
}

TEST_CASE("budget shape: plus convex increasing, minus decreasing") {
    BudgetSpec b(1.56);
    double prev_p = -1.0, prev_m = 2.0 * b.c_alpha, prev_slope = -1e9;
    for (int i = 0; i <= 1000; ++i) {
        double x = i / 1000.0;
        double p = b.plus(x), m = b.minus(x);
        CHECK(p >= prev_p);
        CHECK(m <= prev_m + 1e-12);
        if (i > 0) {
            double slope = (p - prev_p) * 1000.0;
            CHECK(slope >= prev_slope - 1e-9);
            prev_slope = slope;
        }
        prev_p = p;
        prev_m = m;
    }
}

TEST_CASE("budget_plus dominates 2x past the threshold") {
    BudgetSpec b(1.56);
    for (int i = 4000; i <= 10000; ++i) {
        double x = i / 10000.0;
        CHECK(b.plus(x) >= 2.0 * x - 1e-12);
    }
}

TEST_CASE("feasibility polytope membership") {
    CHECK(is_feasible(TriangleProfile::full('+', '+', '+', 0.5, 0.5, 0.5, 0.25)));
    // Triple mass above a pairwise mass.
    CHECK_FALSE(is_feasible(TriangleProfile::full('+', '+', '+', 0.5, 0.5, 0.5, 0.6)));
    // Two sure pairs but the triple never together: rotation bound fails.
    CHECK_FALSE(is_feasible(TriangleProfile::full('+', '+', '-', 1.0, 1.0, 0.0, 0.0)));
    // Three-way sandwich: pairwise sum too large for the triple mass.
    CHECK_FALSE(is_feasible(TriangleProfile::full('+', '+', '+', 0.7, 0.7, 0.7, 0.0)));
    CHECK(is_feasible(TriangleProfile::degen('+', 0.3)));
    CHECK_FALSE(is_feasible(TriangleProfile::degen('-', 1.2)));
    CHECK_THROWS_AS(
        cost_and_delta(TriangleProfile::full('+', '+', '+', 0.5, 0.5, 0.5, 0.6),
                       RuleSet::alg3(), BudgetSpec(1.56)),
        ValidationError);
}

TEST_CASE("triple mass range matches the rotation and sandwich bounds") {
    auto r = triple_mass_range(0.7, 0.7, 0.7);
    REQUIRE(r.has_value());
    CHECK(r->first == doctest::Approx(0.4));  // both 2y-1 and (3y-1.5)/1.5
    CHECK(r->second == doctest::Approx(0.7));
    CHECK_FALSE(triple_mass_range(1.0, 1.0, 0.0).has_value());
    auto small = triple_mass_range(0.2, 0.3, 0.1);
    REQUIRE(small.has_value());
    CHECK(small->first == 0.0);
    CHECK(small->second == doctest::Approx(0.1));
}

TEST_CASE("all-short +++ triangles cost nothing") {
    auto rules = RuleSet::alg3();
    BudgetSpec b(1.56);
    // x = 0.3 <= tau1 on every edge.
    auto t = TriangleProfile::full('+', '+', '+', 0.7, 0.7, 0.7, 0.55);
    auto cd = cost_and_delta(t, rules, b);
    CHECK(cd.cost == doctest::Approx(0.0));
    CHECK(cd.delta >= 0.0);
}

TEST_CASE("all-long +++ worked example") {
    auto rules = RuleSet::alg3();
    BudgetSpec b(1.56);
    auto t = TriangleProfile::full('+', '+', '+', 0.5, 0.5, 0.5, 0.25);
    auto cd = cost_and_delta(t, rules, b);
    CHECK(cd.cost == doctest::Approx(1.5));
    CHECK(cd.delta == doctest::Approx(3.0 * b.plus(0.5) * 0.75).epsilon(1e-9));
    CHECK(cd.delta == doctest::Approx(2.6591).epsilon(1e-4));
    CHECK(cd.margin() == doctest::Approx(1.1591).epsilon(1e-3));
}

TEST_CASE("degenerate pairs charge the full budget twice") {
    auto rules = RuleSet::alg3();
    BudgetSpec b(1.56);
    auto plus = cost_and_delta(TriangleProfile::degen('+', 0.5), rules, b);
    // Long +edge: the non-pivot endpoint joins with probability y = 0.5.
    CHECK(plus.cost == doctest::Approx(1.0));
    CHECK(plus.delta == doctest::Approx(2.0 * b.plus(0.5)));
    auto minus = cost_and_delta(TriangleProfile::degen('-', 0.3), rules, b);
    CHECK(minus.cost == doctest::Approx(2.0 * 0.3));
    CHECK(minus.delta == doctest::Approx(2.0 * b.minus(0.7)));
    auto short_plus = cost_and_delta(TriangleProfile::degen('+', 0.8), rules, b);
    CHECK(short_plus.cost == doctest::Approx(0.0));
}

TEST_CASE("cost and delta are invariant under consistent relabeling") {
    std::mt19937_64 rng(5);
    auto rules = RuleSet::alg4();
    BudgetSpec b(1.485);
    for (int i = 0; i < 200; ++i) {
        auto t = random_feasible_profile(rng);
        auto base = cost_and_delta(t, rules, b);
        // Swap v and w: edges (u,v),(u,w),(v,w) -> (u,w),(u,v),(w,v).
        auto swap_vw = TriangleProfile::full(t.signs[1], t.signs[0], t.signs[2], t.y_uw, t.y_uv,
                                             t.y_vw, t.y_uvw);
        // Swap u and v: edges -> (v,u),(v,w),(u,w).
        auto swap_uv = TriangleProfile::full(t.signs[0], t.signs[2], t.signs[1], t.y_uv, t.y_vw,
                                             t.y_uw, t.y_uvw);
        for (const auto& perm : {swap_vw, swap_uv}) {
            auto cd = cost_and_delta(perm, rules, b);
            CHECK(cd.cost == doctest::Approx(base.cost).epsilon(1e-12));
            CHECK(cd.delta == doctest::Approx(base.delta).epsilon(1e-12));
        }
    }
}

TEST_CASE("degenerate substitution never increases the margin") {
    for (const auto& rules : {RuleSet::alg3(), RuleSet::alg4()})
        for (double alpha : {4.0 / 3.0, 1.485, 1.56}) {
            BudgetSpec b(alpha);
            for (char s : {'+', '-'})
                for (int i = 0; i <= 200; ++i) {
                    auto d = TriangleProfile::degen(s, i / 200.0);
                    double direct = cost_and_delta(d, rules, b).margin();
                    double sub = cost_and_delta(d.substituted(), rules, b).margin();
                    CHECK(sub <= direct + 1e-9);
                }
        }
}

TEST_CASE("grid certification at alpha = 1.56 under the linear rules") {
    auto rep = verify_triangle_budgets(BudgetSpec(1.56), RuleSet::alg3(), 0.05);
    CHECK(rep.min_margin >= -1e-9);
    CHECK(rep.violations == 0);
    CHECK(rep.evaluated > 10000);
}

TEST_CASE("degenerate-only grid holds already at alpha = 4/3") {
    auto rep = verify_triangle_budgets(BudgetSpec(4.0 / 3.0), RuleSet::alg3(), 0.01, false, true);
    CHECK(rep.min_margin >= -1e-9);
}

TEST_CASE("negative control: alpha = 1.40 leaks") {
    auto rep = verify_triangle_budgets(BudgetSpec(1.40), RuleSet::alg3(), 0.05);
    CHECK(rep.min_margin < -1e-9);
    CHECK(rep.violations > 0);
    CHECK(is_feasible(rep.argmin));
    CHECK(cost_and_delta(rep.argmin, RuleSet::alg3(), BudgetSpec(1.40)).margin() ==
          doctest::Approx(rep.min_margin));
}

TEST_CASE("--- triangles never lose, even at alpha = 1") {
    for (double alpha : {1.0, 4.0 / 3.0, 1.56}) {
        BudgetSpec b(alpha);
        for (int i = 0; i <= 20; ++i)
            for (int j = 0; j <= 20; ++j)
                for (int k = 0; k <= 20; ++k) {
                    auto range = triple_mass_range(i / 20.0, j / 20.0, k / 20.0);
                    if (!range) continue;
                    for (double d : {range->first, (range->first + range->second) / 2,
                                     range->second}) {
                        auto t = TriangleProfile::full('-', '-', '-', i / 20.0, j / 20.0,
                                                       k / 20.0, d);
                        CHECK(cost_and_delta(t, RuleSet::alg3(), b).margin() >= -1e-9);
                    }
                }
    }
}

TEST_CASE("d_tilde lower-bounds the margin over sampled cell members") {
    std::mt19937_64 rng(11);
    auto rules = RuleSet::alg4();
    BudgetSpec b(1.485);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int nonempty = 0;
    for (int c = 0; c < 12; ++c) {
        Cell cell;
        for (int i = 0; i < 4; ++i) {
            double a = unif(rng), w = 0.08 * unif(rng);
            cell.lo[i] = std::min(a, 1.0 - w);
            cell.hi[i] = cell.lo[i] + w;
        }
        auto bound = d_tilde(cell, rules, b, 3);
        if (!bound) continue;
        ++nonempty;
        // Rejection-sample members of the cell and check dominance.
        for (int s = 0; s < 100; ++s) {
            std::array<double, 4> q;
            for (int i = 0; i < 4; ++i) q[i] = cell.lo[i] + (cell.hi[i] - cell.lo[i]) * unif(rng);
            auto t = TriangleProfile::full(rng() & 1 ? '+' : '-', rng() & 1 ? '+' : '-',
                                           rng() & 1 ? '+' : '-', q[0], q[1], q[2], q[3]);
            if (!is_feasible(t)) continue;
            CHECK(cost_and_delta(t, rules, b).margin() >= *bound - 1e-9);
        }
    }
    CHECK(nonempty > 0);
}

TEST_CASE("d_tilde on an all-short +++ cell is nonnegative") {
    Cell cell;
    cell.lo = {0.95, 0.95, 0.95, 0.9};
    cell.hi = {0.99, 0.99, 0.99, 0.95};
    std::array<char, 3> plus{'+', '+', '+'};
    auto bound = d_tilde(cell, RuleSet::alg3(), BudgetSpec(1.56), 5, &plus);
    REQUIRE(bound.has_value());
    CHECK(*bound >= 0.0);
    // Cost is identically zero there, so the bound is pure budget mass.
    auto cd = cost_and_delta(TriangleProfile::full('+', '+', '+', 0.97, 0.97, 0.97, 0.95),
                             RuleSet::alg3(), BudgetSpec(1.56));
    CHECK(cd.cost == doctest::Approx(0.0));
}

TEST_CASE("infeasible cells signal empty") {
    Cell cell;
    cell.lo = {0.95, 0.95, 0.0, 0.0};
    cell.hi = {1.0, 1.0, 0.02, 0.02};  // forces y_uv + y_uw - y_uvw > 1
    CHECK_FALSE(d_tilde(cell, RuleSet::alg3(), BudgetSpec(1.56)).has_value());
    Cell bad;
    bad.lo = {0.5, 0.2, 0.2, 0.0};
    bad.hi = {0.4, 0.3, 0.3, 0.1};
    CHECK_THROWS_AS(d_tilde(bad, RuleSet::alg3(), BudgetSpec(1.56)), ValidationError);
}

TEST_CASE("degenerate d_tilde stays below both evaluations") {
    auto rules = RuleSet::alg4();
    BudgetSpec b(1.485);
    auto bound = d_tilde_degenerate(0.4, 0.45, rules, b, 9);
    REQUIRE(bound.has_value());
    for (int i = 0; i <= 50; ++i) {
        double y = 0.4 + 0.05 * i / 50.0;
        for (char s : {'+', '-'}) {
            auto d = TriangleProfile::degen(s, y);
            CHECK(cost_and_delta(d, rules, b).margin() >= *bound - 1e-9);
            CHECK(cost_and_delta(d.substituted(), rules, b).margin() >= *bound - 1e-9);
        }
    }
}

TEST_CASE("Monte Carlo oracle agrees with the closed forms (coarse)") {
    std::mt19937_64 rng(3);
    for (const auto& rules : {RuleSet::alg3(), RuleSet::alg4()}) {
        BudgetSpec b(rules.minus_quadratic ? 1.485 : 1.56);
        for (int i = 0; i < 6; ++i) {
            auto t = random_feasible_profile(rng);
            auto exact = cost_and_delta(t, rules, b);
            auto sim = simulate_cost_delta(t, rules, b, 40000, 1000 + i);
            CHECK(std::abs(sim.cost - exact.cost) <= 3.0 * sim.cost_se + 1e-9);
            CHECK(std::abs(sim.delta - exact.delta) <= 3.0 * sim.delta_se + 1e-9);
        }
        // Degenerate profile: delta is deterministic, cost binomial.
        auto d = TriangleProfile::degen('-', 0.35);
        auto exact = cost_and_delta(d, rules, b);
        auto sim = simulate_cost_delta(d, rules, b, 40000, 9);
        CHECK(sim.delta == doctest::Approx(exact.delta));
        CHECK(std::abs(sim.cost - exact.cost) <= 3.0 * sim.cost_se + 1e-9);
    }
}
