#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cclp/sdp_factory.hpp"

using namespace cclp;

namespace {

Discretization coarse_disc() {
    Discretization d;
    d.breakpoints = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    d.validate();
    return d;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ClusterLpSolution integral_solution(int n, const Clustering& c) {
    ClusterLpSolution sol;
    sol.n = n;
    for (const auto& cl : c.clusters) {
        std::uint64_t mask = 0;
        for (int v : cl) mask |= 1ull << v;
        sol.z.emplace_back(mask, 1.0);
    }
    std::sort(sol.z.begin(), sol.z.end());
    sol.x = FractionalAssignment(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) sol.x.set(u, v, 1.0 - sol.y_pair(u, v));
    return sol;
}

}  // namespace

TEST_CASE("default breakpoints") {
    auto d = default_breakpoints();
    CHECK(d.t() == 28);
    std::vector<double> want = {0,    0.05, 0.1,  0.2,  0.3,  0.35, 0.38, 0.39, 0.40, 0.405,
                                0.41, 0.42, 0.44, 0.45, 0.5,  0.55, 0.57, 0.58, 0.6,  0.65,
                                0.7,  0.75, 0.78, 0.8,  0.9,  0.95, 0.96, 0.99, 1};
    CHECK(d.breakpoints == want);
    for (std::size_t i = 1; i < d.breakpoints.size(); ++i)
        CHECK(d.breakpoints[i - 1] < d.breakpoints[i]);
    // The rounding threshold 0.40 is an interval boundary.
    bool has_040 = false;
    for (int i = 0; i < d.t(); ++i) has_040 = has_040 || d.r(i) == 0.40;
    CHECK(has_040);
    // Lookup convention: half-open intervals, last one closed.
    CHECK(d.interval_of(0.0) == 0);
    CHECK(d.interval_of(0.05) == 1);
    CHECK(d.interval_of(0.9999) == 27);
    CHECK(d.interval_of(1.0) == 27);
    CHECK_THROWS_AS(d.interval_of(-0.1), ValidationError);
}

TEST_CASE("triple-mass refinement policy") {
    auto d = default_breakpoints();
    int i_039 = d.interval_of(0.395);  // [0.39, 0.40] is inside both windows
    CHECK(d.triple_subdivisions(i_039, i_039) == 20);
    int i_05 = d.interval_of(0.52);  // [0.5, 0.55] inside [0.38, 0.65] only
    CHECK(d.triple_subdivisions(i_039, i_05) == 10);
    int i_01 = d.interval_of(0.07);
    CHECK(d.triple_subdivisions(i_01, i_039) == 1);
}

TEST_CASE("corner sets and multilinear reconstruction") {
    auto box = CornerSet::from_box({0.2, 0.4, 0.4, 0.1}, {0.4, 0.6, 0.6, 0.3});
    CHECK(box.corners.size() == 16);
    auto flat = CornerSet::from_box({0.2, 0.4, 1.0, 0.1}, {0.4, 0.6, 1.0, 0.3});
    CHECK(flat.corners.size() == 8);

    // At a corner the weights collapse to a unit vector.
    auto w = box.weights_for(box.corners[5]);
    for (std::size_t i = 0; i < w.size(); ++i)
        CHECK(w[i] == doctest::Approx(i == 5 ? 1.0 : 0.0));

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int cell = 0; cell < 50; ++cell) {
        std::array<double, 4> lo, hi;
        for (int i = 0; i < 4; ++i) {
            double a = 0.9 * unif(rng);
            lo[i] = a;
            hi[i] = a + 0.1 * unif(rng) + 1e-3;
        }
        auto cs = CornerSet::from_box(lo, hi);
        for (int s = 0; s < 200; ++s) {
            std::array<double, 4> q;
            for (int i = 0; i < 4; ++i) q[i] = lo[i] + (hi[i] - lo[i]) * unif(rng);
            auto direct = covariance_values(q);
            auto weights = cs.weights_for(q);
            std::array<double, 6> recon{};
            double wsum = 0.0;
            for (std::size_t c = 0; c < cs.corners.size(); ++c) {
                auto cv = covariance_values(cs.corners[c]);
                for (int k = 0; k < 6; ++k) recon[static_cast<std::size_t>(k)] +=
                    weights[c] * cv[static_cast<std::size_t>(k)];
                wsum += weights[c];
            }
            CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
            for (int k = 0; k < 6; ++k)
                CHECK(std::abs(recon[static_cast<std::size_t>(k)] -
                               direct[static_cast<std::size_t>(k)]) <= 1e-12);
        }
    }
}

TEST_CASE("coarse model assembly") {
    auto model = assemble_matrices(coarse_disc(), RuleSet::alg4(), BudgetSpec(1.485), 2);
    CHECK(model.t == 5);
    CHECK(!model.vars.empty());
    // Corner coordinates are breakpoints or triple-mass endpoints in [0,1].
    for (const auto& var : model.vars)
        for (double v : var.corner) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    // Coalescing: corner quadruples are unique.
    CHECK(model.index.size() == model.vars.size());

    // The all-ones type contributes nothing to Q and 6 units of frequency
    // mass on the last diagonal cell.
    int top = model.find({1.0, 1.0, 1.0, 1.0});
    REQUIRE(top >= 0);
    std::vector<double> eta(model.vars.size(), 0.0);
    eta[static_cast<std::size_t>(top)] = 1.0;
    auto rep = evaluate_eta(model, eta);
    CHECK(rep.min_eig_q == doctest::Approx(0.0));
    CHECK(rep.sum_eta == doctest::Approx(1.0));
    bool has_q = false;
    double f_diag = 0.0;
    for (const auto& e : model.vars[static_cast<std::size_t>(top)].entries) {
        if (e.block == 1) has_q = true;
        if (e.block == 2 && e.row == model.t - 1 && e.col == model.t - 1) f_diag = e.value;
    }
    CHECK_FALSE(has_q);
    CHECK(f_diag == doctest::Approx(6.0));

    // Uniform eta: both matrices stay symmetric and sum_eta normalizes.
    std::vector<double> uni(model.vars.size(), 1.0 / static_cast<double>(model.vars.size()));
    auto urep = evaluate_eta(model, uni);
    CHECK(urep.sum_eta == doctest::Approx(1.0));

    CHECK_THROWS_AS(evaluate_eta(model, std::vector<double>(3, 0.1)), ValidationError);
    std::vector<double> neg(model.vars.size(), 0.0);
    neg[0] = -0.5;
    CHECK_THROWS_AS(evaluate_eta(model, neg), ValidationError);
}

TEST_CASE("model objective lower-bounds sampled triangle margins") {
    auto rules = RuleSet::alg4();
    BudgetSpec b(1.485);
    auto model = assemble_matrices(coarse_disc(), rules, b, 3);
    std::mt19937_64 rng(8);
    for (int s = 0; s < 300; ++s) {
        auto t = random_feasible_profile(rng);
        std::array<double, 3> ys{t.y_uv, t.y_uw, t.y_vw};
        std::sort(ys.begin(), ys.end());
        double margin = cost_and_delta(t, rules, b).margin();
        // Find the variable set of the triangle's cell via the census
        // operator on a synthetic solution is overkill; instead check the
        // recorded per-cell bound of any corner in that cell.
        int i = model.disc.interval_of(ys[0]);
        int j = model.disc.interval_of(ys[1]);
        int k = model.disc.interval_of(ys[2]);
        double best_obj = -1e30;
        bool found = false;
        for (const auto& var : model.vars)
            if (!var.from_degenerate && var.cell_i == i && var.cell_j == j && var.cell_k == k) {
                double lo3 = var.corner[3];
                (void)lo3;
                best_obj = std::max(best_obj, var.obj);
                found = true;
            }
        if (!found) continue;  // cell pruned as infeasible at box level
        // The smallest sub-cell bound is <= margin; the largest recorded obj
        // need not be, so only check against the minimum over the cell.
        double min_obj = 1e30;
        for (const auto& var : model.vars)
            if (!var.from_degenerate && var.cell_i == i && var.cell_j == j && var.cell_k == k)
                min_obj = std::min(min_obj, var.obj);
        CHECK(min_obj <= margin + 1e-9);
    }
}

TEST_CASE("census constructions agree and stay PSD") {
    auto inst = generate_random(7, 0.5, 33);
    auto sol = solve_cluster_lp_exact(inst);
    for (const auto& d : {coarse_disc(), default_breakpoints()}) {
        auto by_vertex = census_q_by_vertex(d, sol);
        auto by_triangle = census_q_by_triangle(d, sol);
        REQUIRE(by_vertex.size() == by_triangle.size());
        for (std::size_t i = 0; i < by_vertex.size(); ++i)
            CHECK(std::abs(by_vertex[i] - by_triangle[i]) <= 1e-9);
        CHECK(symmetric_min_eigenvalue(by_vertex, d.t()) >= -1e-7);

        auto f = census_f(d, sol);
        double total = 0.0;
        int t = d.t();
        for (int a = 0; a < t; ++a)
            for (int c = 0; c < t; ++c) {
                total += f[static_cast<std::size_t>(a) * t + c];
                CHECK(f[static_cast<std::size_t>(a) * t + c] ==
                      doctest::Approx(f[static_cast<std::size_t>(c) * t + a]));
            }
        CHECK(total == doctest::Approx(7.0 * 7.0 * 7.0));
        CHECK(symmetric_min_eigenvalue(std::move(f), t) >= -1e-7);
    }
}

TEST_CASE("census-mapped eta reproduces the matrices on integral solutions") {
    auto model = assemble_matrices(coarse_disc(), RuleSet::alg4(), BudgetSpec(1.485), 2);
    int n = 6;
    Clustering c{{{0, 1, 2}, {3, 4}, {5}}};
    auto sol = integral_solution(n, c);
    auto eta = eta_from_census(model, sol);
    double sum = 0.0;
    for (double e : eta) {
        CHECK(e >= 0.0);
        sum += e;
    }
    CHECK(sum == doctest::Approx(20.0 + 15.0 + 1.0));  // C(6,3) + C(6,2) + 6/6

    int t = model.t;
    std::vector<double> q(static_cast<std::size_t>(t) * t, 0.0);
    std::vector<double> f(static_cast<std::size_t>(t) * t, 0.0);
    for (std::size_t v = 0; v < eta.size(); ++v)
        accumulate_entries(model.vars[v].entries, eta[v], t, q, f);
    auto qc = census_q_by_vertex(model.disc, sol);
    auto fc = census_f(model.disc, sol);
    for (std::size_t i = 0; i < q.size(); ++i) {
        CHECK(std::abs(q[i] - qc[i]) <= 1e-9);
        CHECK(std::abs(f[i] - fc[i]) <= 1e-9);
    }

    // Objective from per-cell bounds never exceeds the true margin total.
    auto rep = evaluate_eta(model, eta);
    double direct = 0.0;
    auto rules = RuleSet::alg4();
    BudgetSpec b(1.485);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            direct += cost_and_delta(TriangleProfile::degen('+', sol.y_pair(u, v)).substituted(),
                                     rules, b)
                          .margin();
            for (int w = v + 1; w < n; ++w) {
                auto tp = TriangleProfile::full('+', '+', '+', sol.y_pair(u, v),
                                                sol.y_pair(u, w), sol.y_pair(v, w),
                                                sol.y_triple(u, v, w));
                direct += cost_and_delta(tp, rules, b).margin();
            }
        }
    CHECK(rep.objective <= direct + 1e-6);
}

TEST_CASE("sdpa emission round-trips") {
    auto model = assemble_matrices(coarse_disc(), RuleSet::alg4(), BudgetSpec(1.485), 2);
    std::string path = "/tmp/cclp_test_model.dat-s";
    emit_sdpa(model, path);
    auto parsed = read_sdpa(path);
    auto direct = sdpa_contents(model);
    CHECK(parsed == direct);
    CHECK(parsed.block_struct.size() == 3);
    CHECK(parsed.block_struct[0] == model.t);
    CHECK(parsed.block_struct[1] == model.t);
    CHECK(parsed.block_struct[2] == -(static_cast<int>(model.vars.size()) + 2));

    std::string path2 = "/tmp/cclp_test_model2.dat-s";
    emit_sdpa(model, path2);
    CHECK(slurp(path) == slurp(path2));

    auto side = nlohmann::json::parse(slurp(path + ".index.json"));
    CHECK(side["schema_version"] == 1);
    CHECK(side["variables"].size() == model.vars.size());
    CHECK(side["rules"] == "alg4");
    std::remove(path.c_str());
    std::remove(path2.c_str());
    std::remove((path + ".index.json").c_str());
    std::remove((path2 + ".index.json").c_str());

    SdpModel empty;
    CHECK_THROWS_AS(sdpa_contents(empty), ValidationError);
}
