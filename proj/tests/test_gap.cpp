#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "cclp/gap.hpp"

using namespace cclp;

TEST_CASE("line graph construction") {
    CHECK_THROWS_AS(build_line_graph_instance(2), ValidationError);

    auto k3 = build_line_graph_instance(3);
    CHECK(k3.inst.n() == 3);
    CHECK(k3.inst.plus_count() == 3);  // any two edges of K3 share a vertex

    auto k5 = build_line_graph_instance(5);
    CHECK(k5.inst.n() == 10);
    CHECK(k5.inst.plus_count() == 30);
    for (int e = 0; e < 10; ++e) {
        int deg = 0;
        for (int f = 0; f < 10; ++f)
            if (f != e && k5.inst.is_plus(e, f)) ++deg;
        CHECK(deg == 6);
    }
    // vertex() agrees with edge_of.
    for (int e = 0; e < 10; ++e) {
        auto [a, b] = k5.edge_of[static_cast<std::size_t>(e)];
        CHECK(k5.vertex(a, b) == e);
        CHECK(k5.vertex(b, a) == e);
    }
}

TEST_CASE("fractional star solution") {
    auto lgi = build_line_graph_instance(5);
    auto sol = fractional_star_solution(lgi);
    CHECK(sol.z.size() == 5);
    CHECK(sol.lp_value == doctest::Approx(15.0));
    // Coverage: each base edge sits in exactly its two endpoint stars.
    for (int u = 0; u < 10; ++u) {
        double cover = 0.0;
        for (const auto& [mask, v] : sol.z)
            if (mask >> u & 1) cover += v;
        CHECK(cover == doctest::Approx(1.0));
    }
    // Distances: 1/2 between edges sharing a vertex, 1 otherwise.
    for (int e = 0; e < 10; ++e)
        for (int f = e + 1; f < 10; ++f)
            CHECK(sol.x.x(e, f) == doctest::Approx(lgi.inst.is_plus(e, f) ? 0.5 : 1.0));
    // Structural LP-solution invariants carry over.
    for (int u = 0; u < 10; ++u) CHECK(check_covariance_psd(sol, u) >= -1e-9);
    CHECK(check_gram_psd(sol) >= -1e-9);
    for (int u = 0; u < 10; ++u)
        for (int v = u + 1; v < 10; ++v)
            for (int w = v + 1; w < 10; ++w) {
                auto t = derive_triple_stats(sol, u, v, w);
                CHECK(t.y_uvw <= std::min({t.y_uv, t.y_uw, t.y_vw}) + 1e-9);
                // Per-vertex rotation: u's mass splits over sets containing
                // v, w, both, or neither, and the last share is nonnegative.
                CHECK(1.0 - t.y_uv - t.y_uw + t.y_uvw >= -1e-9);
                CHECK(1.0 - t.y_uv - t.y_vw + t.y_uvw >= -1e-9);
                CHECK(1.0 - t.y_uw - t.y_vw + t.y_uvw >= -1e-9);
            }

    CHECK_THROWS_AS(fractional_star_solution(build_line_graph_instance(12)), CapacityError);
}

TEST_CASE("star clustering costs") {
    auto lgi = build_line_graph_instance(5);
    std::vector<int> order{0, 1, 2, 3, 4};
    auto stars = star_clustering(lgi, order);
    stars.validate(10);
    std::vector<std::size_t> sizes;
    for (const auto& c : stars.clusters) sizes.push_back(c.size());
    CHECK(sizes == std::vector<std::size_t>{4, 3, 2, 1});
    CHECK(objective_clustering(lgi.inst, stars) == 20);

    // Cost is order-independent: always n(n-1)(n-2)/3.
    std::vector<int> rev{4, 3, 2, 1, 0};
    CHECK(objective_clustering(lgi.inst, star_clustering(lgi, rev)) == 20);

    CHECK_THROWS_AS(star_clustering(lgi, {0, 1, 2, 3}), ValidationError);
    CHECK_THROWS_AS(star_clustering(lgi, {0, 1, 2, 3, 3}), ValidationError);
}

TEST_CASE("exact 4/3 ratio on a span of sizes") {
    for (int n : {3, 4, 5, 8, 13, 21, 34, 55, 144, 200}) {
        auto row = gap_row(n, n <= 34);
        CHECK(row.ratio_num == 4);
        CHECK(row.ratio_den == 3);
        CHECK(row.star_cost == static_cast<long long>(n) * (n - 1) * (n - 2) / 3);
    }
}

TEST_CASE("n = 5 oracle row") {
    auto row = gap_row(5, true);
    REQUIRE(row.opt.has_value());
    REQUIRE(row.lp_value.has_value());
    CHECK(*row.opt <= 20);
    CHECK(*row.lp_value <= 15.0 + 1e-6);
    CHECK(static_cast<double>(*row.opt) >= *row.lp_value - 1e-6);
}

TEST_CASE("half-neighbor audit") {
    auto lgi = build_line_graph_instance(5);
    CHECK(cluster_size_bound_check(lgi, Clustering::singletons(10)));
    std::vector<int> order{0, 1, 2, 3, 4};
    CHECK(cluster_size_bound_check(lgi, star_clustering(lgi, order)));
    // Edge (3,4) is disjoint from (0,1) and (0,2): only itself as a
    // +neighbor in a size-3 cluster, so the bound 2*1 >= 3 fails.
    Clustering bad{{{lgi.vertex(0, 1), lgi.vertex(0, 2), lgi.vertex(3, 4)},
                    {lgi.vertex(0, 3), lgi.vertex(0, 4), lgi.vertex(1, 2), lgi.vertex(1, 3),
                     lgi.vertex(1, 4), lgi.vertex(2, 3), lgi.vertex(2, 4)}}};
    CHECK_FALSE(cluster_size_bound_check(lgi, bad));

    auto opt = solve_exact(lgi.inst);
    CHECK(cluster_size_bound_check(lgi, opt.witness));
}

TEST_CASE("gap report table") {
    auto rows = gap_report({3, 5, 20}, 20);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.ratio_num == 4);
        CHECK(r.ratio_den == 3);
        CHECK(r.vertices == static_cast<long long>(r.n) * (r.n - 1) / 2);
    }
    CHECK(rows[1].opt.has_value());
    CHECK_FALSE(rows[2].opt.has_value());
}
