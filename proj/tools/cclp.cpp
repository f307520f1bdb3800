// Command-line front end for the correlation-clustering toolkit: exact and
// LP solving, preclustering, LP rounding, triangle-budget verification, the
// factor-revealing SDP factory, the 4/3-gap family, and the release gate.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "cclp/criteria.hpp"

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

void write_output(const json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw cclp::ValidationError("cannot open output file: " + path);
    out << j.dump(2) << "\n";
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cclp::ValidationError("cannot open input file: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw cclp::ParseError(path + ": " + e.what());
    }
}

std::vector<int> mask_members(std::uint64_t mask) {
    std::vector<int> out;
    for (int v = 0; v < 64; ++v)
        if (mask >> v & 1) out.push_back(v);
    return out;
}

json lp_solution_to_json(const cclp::ClusterLpSolution& sol) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "cluster_lp_solution";
    j["n"] = sol.n;
    j["value"] = sol.lp_value;
    j["z"] = json::array();
    for (const auto& [mask, v] : sol.z)
        if (v > 1e-9) j["z"].push_back({{"set", mask_members(mask)}, {"mass", v}});
    j["x"] = json::array();
    for (int u = 0; u < sol.n; ++u)
        for (int v = u + 1; v < sol.n; ++v)
            j["x"].push_back({{"u", u}, {"v", v}, {"x", sol.x.x(u, v)}});
    return j;
}

cclp::ClusterLpSolution lp_solution_from_json(const json& j) {
    if (!j.contains("n") || !j.contains("z"))
        throw cclp::ParseError("solution JSON needs fields n and z");
    cclp::ClusterLpSolution sol;
    sol.n = j.at("n").get<int>();
    if (sol.n < 1 || sol.n > 64) throw cclp::ParseError("solution n out of range");
    for (const auto& entry : j.at("z")) {
        std::uint64_t mask = 0;
        for (int v : entry.at("set").get<std::vector<int>>()) {
            if (v < 0 || v >= sol.n) throw cclp::ParseError("solution set member out of range");
            mask |= 1ull << v;
        }
        if (!mask) throw cclp::ParseError("solution contains an empty set");
        sol.z.emplace_back(mask, entry.at("mass").get<double>());
    }
    std::sort(sol.z.begin(), sol.z.end());
    sol.x = cclp::FractionalAssignment(sol.n);
    for (int u = 0; u < sol.n; ++u)
        for (int v = u + 1; v < sol.n; ++v) sol.x.set(u, v, 1.0 - sol.y_pair(u, v));
    if (j.contains("value")) sol.lp_value = j.at("value").get<double>();
    return sol;
}

cclp::RuleSet rules_by_name(const std::string& name) {
    if (name == "alg3") return cclp::RuleSet::alg3();
    if (name == "alg4") return cclp::RuleSet::alg4();
    if (name == "independent") return cclp::RuleSet::independent();
    throw cclp::ValidationError("unknown rule set: " + name);
}

json profile_json(const cclp::TriangleProfile& t) {
    return {{"degenerate", t.degenerate},
            {"signs", std::string(t.signs.begin(), t.signs.end())},
            {"y_uv", t.y_uv},
            {"y_uw", t.y_uw},
            {"y_vw", t.y_vw},
            {"y_uvw", t.y_uvw}};
}

int run(int argc, char** argv) {
    CLI::App app{"correlation clustering cluster-LP toolkit"};
    app.require_subcommand(1);

    std::string instance_path, solution_path, out_path, csv_path, model_path, eta_path;
    std::string relaxation = "cluster", rules_name = "alg3", breakpoints_path, level;
    int max_n = 12, trials = 100, workers = 0;
    double eps = 0.25, beta = 0.1, alpha = 1.56, step = 0.02;
    std::uint64_t seed = 0;
    std::vector<int> gap_ns;

    auto* solve_exact_cmd = app.add_subcommand("solve-exact", "brute-force optimum over all partitions");
    solve_exact_cmd->add_option("--instance", instance_path, "instance JSON")->required();
    solve_exact_cmd->add_option("--max-n", max_n, "capacity cap on n");
    solve_exact_cmd->add_option("--out", out_path, "output path (default stdout)");

    auto* solve_lp_cmd = app.add_subcommand("solve-lp", "exact cluster LP or pairwise triangle LP");
    solve_lp_cmd->add_option("--instance", instance_path)->required();
    solve_lp_cmd->add_option("--relaxation", relaxation, "cluster|pairwise")
        ->check(CLI::IsMember({"cluster", "pairwise"}));
    solve_lp_cmd->add_option("--max-n", max_n);
    solve_lp_cmd->add_option("--out", out_path);

    auto* precluster_cmd = app.add_subcommand("precluster", "atoms and admissible edges");
    precluster_cmd->add_option("--instance", instance_path)->required();
    precluster_cmd->add_option("--eps", eps, "similarity threshold");
    precluster_cmd->add_option("--beta", beta, "atom denseness parameter");
    precluster_cmd->add_option("--seed", seed, "seed for the starting pivot clustering");
    precluster_cmd->add_option("--out", out_path);

    auto* round_cmd = app.add_subcommand("round", "randomized rounding of an LP solution");
    round_cmd->add_option("--instance", instance_path)->required();
    round_cmd->add_option("--solution", solution_path, "cluster LP solution JSON (from solve-lp)");
    round_cmd->add_option("--rules", rules_name, "alg3|alg4|cluster|classic");
    round_cmd->add_option("--trials", trials);
    round_cmd->add_option("--seed", seed);
    round_cmd->add_option("--out", out_path);

    auto* verify_cmd = app.add_subcommand("verify-triangles", "grid-certify cost <= delta");
    verify_cmd->add_option("--alpha", alpha);
    verify_cmd->add_option("--rules", rules_name, "alg3|alg4|independent");
    verify_cmd->add_option("--step", step);
    verify_cmd->add_option("--out", out_path);

    auto* sdp_cmd = app.add_subcommand("build-sdp", "assemble the factor-revealing SDP");
    sdp_cmd->add_option("--alpha", alpha);
    sdp_cmd->add_option("--rules", rules_name, "alg3|alg4|independent");
    sdp_cmd->add_option("--breakpoints", breakpoints_path, "JSON array overriding the grid");
    sdp_cmd->add_option("--workers", workers, "0 = available parallelism");
    sdp_cmd->add_option("--out", model_path, "output .dat-s path")->required();

    auto* eta_cmd = app.add_subcommand("eval-eta", "validate a multiplier vector for a model");
    eta_cmd->add_option("--model", model_path, ".dat-s emitted by build-sdp")->required();
    eta_cmd->add_option("--eta", eta_path, "JSON array (or {\"eta\": [...]})")->required();
    eta_cmd->add_option("--out", out_path);

    auto* gap_cmd = app.add_subcommand("gap", "4/3-gap family report");
    gap_cmd->add_option("--n", gap_ns, "base sizes")->required()->delimiter(',');
    gap_cmd->add_option("--csv", csv_path, "also write a CSV table");
    gap_cmd->add_option("--out", out_path);

    auto* repro_cmd = app.add_subcommand("reproduce", "run the acceptance criteria");
    repro_cmd->add_option("level", level, "smoke|full")
        ->required()
        ->check(CLI::IsMember({"smoke", "full"}));
    repro_cmd->add_option("--out", out_path, "results manifest path");

    CLI11_PARSE(app, argc, argv);

    if (solve_exact_cmd->parsed()) {
        auto inst = cclp::read_instance(instance_path);
        auto res = cclp::solve_exact(inst, max_n);
        json j = {{"schema_version", kSchemaVersion},
                  {"opt", res.opt_value},
                  {"witness", cclp::clustering_to_json(res.witness)},
                  {"partitions_enumerated", res.partitions_enumerated}};
        write_output(j, out_path);
    } else if (solve_lp_cmd->parsed()) {
        auto inst = cclp::read_instance(instance_path);
        if (relaxation == "cluster") {
            auto sol = cclp::solve_cluster_lp_exact(inst, max_n);
            write_output(lp_solution_to_json(sol), out_path);
        } else {
            auto sol = cclp::solve_pairwise_lp(inst);
            json j = {{"schema_version", kSchemaVersion},
                      {"kind", "pairwise_lp_solution"},
                      {"n", sol.n},
                      {"value", sol.lp_value},
                      {"x", json::array()}};
            for (int u = 0; u < sol.n; ++u)
                for (int v = u + 1; v < sol.n; ++v)
                    j["x"].push_back({{"u", u}, {"v", v}, {"x", sol.x.x(u, v)}});
            write_output(j, out_path);
        }
    } else if (precluster_cmd->parsed()) {
        auto inst = cclp::read_instance(instance_path);
        auto atoms = cclp::build_atoms(inst, beta, seed);
        auto pre = cclp::build_admissible(inst, atoms, eps);
        json adm = json::array();
        for (auto key : pre.admissible)
            adm.push_back({cclp::pair_key_lo(key), cclp::pair_key_hi(key)});
        json j = {{"schema_version", kSchemaVersion},
                  {"seed", seed},
                  {"eps", eps},
                  {"beta", beta},
                  {"atoms", cclp::clustering_to_json(atoms)},
                  {"admissible", adm}};
        write_output(j, out_path);
    } else if (round_cmd->parsed()) {
        auto inst = cclp::read_instance(instance_path);
        if (trials <= 0) throw cclp::ValidationError("trials must be positive");
        cclp::Clustering best;
        long long best_cost = -1;
        double sum = 0.0;
        std::mt19937_64 seeder(seed);
        auto consider = [&](cclp::Clustering c) {
            long long cost = cclp::objective_clustering(inst, c);
            sum += static_cast<double>(cost);
            if (best_cost < 0 || cost < best_cost) {
                best_cost = cost;
                best = std::move(c);
            }
        };
        if (rules_name == "classic") {
            for (int t = 0; t < trials; ++t) consider(cclp::round_classic_pivot(inst, seeder()));
        } else {
            if (solution_path.empty())
                throw cclp::ValidationError("--solution is required for LP-based rounding");
            auto sol = lp_solution_from_json(load_json(solution_path));
            if (sol.n != inst.n())
                throw cclp::ValidationError("solution and instance disagree on n");
            if (rules_name == "cluster") {
                for (int t = 0; t < trials; ++t)
                    consider(cclp::round_cluster_based(sol, seeder()));
            } else {
                auto rules = rules_by_name(rules_name);
                for (int t = 0; t < trials; ++t)
                    consider(cclp::round_pivot(inst, sol, rules, seeder()).clustering);
            }
        }
        json j = {{"schema_version", kSchemaVersion},
                  {"seed", seed},
                  {"rules", rules_name},
                  {"trials", trials},
                  {"best_cost", best_cost},
                  {"mean_cost", sum / trials},
                  {"best", cclp::clustering_to_json(best)}};
        write_output(j, out_path);
    } else if (verify_cmd->parsed()) {
        auto rep = cclp::verify_triangle_budgets(cclp::BudgetSpec(alpha), rules_by_name(rules_name),
                                                 step);
        json j = {{"schema_version", kSchemaVersion},
                  {"alpha", alpha},
                  {"rules", rules_name},
                  {"step", step},
                  {"min", rep.min_margin},
                  {"argmin", profile_json(rep.argmin)},
                  {"cells", rep.evaluated},
                  {"violations", rep.violations}};
        write_output(j, out_path);
        if (rep.violations > 0) return 4;
    } else if (sdp_cmd->parsed()) {
        auto disc = cclp::default_breakpoints();
        if (!breakpoints_path.empty()) {
            disc.breakpoints = load_json(breakpoints_path).get<std::vector<double>>();
            disc.validate();
        }
        auto model = cclp::assemble_matrices(disc, rules_by_name(rules_name),
                                             cclp::BudgetSpec(alpha), 3, workers);
        cclp::emit_sdpa(model, model_path);
        std::cout << "wrote " << model_path << " (" << model.vars.size() << " variables, "
                  << model.t << "x" << model.t << " matrix blocks)\n";
    } else if (eta_cmd->parsed()) {
        auto sidecar = load_json(model_path + ".index.json");
        auto disc = cclp::default_breakpoints();
        disc.breakpoints = sidecar.at("breakpoints").get<std::vector<double>>();
        disc.validate();
        auto model = cclp::assemble_matrices(
            disc, rules_by_name(sidecar.at("rules").get<std::string>()),
            cclp::BudgetSpec(sidecar.at("alpha").get<double>()));
        if (cclp::read_sdpa(model_path) != cclp::sdpa_contents(model))
            throw cclp::ValidationError("model file does not match its reassembled sidecar");
        auto ej = load_json(eta_path);
        auto eta = (ej.is_object() ? ej.at("eta") : ej).get<std::vector<double>>();
        auto rep = cclp::evaluate_eta(model, eta);
        json j = {{"schema_version", kSchemaVersion},
                  {"objective", rep.objective},
                  {"min_eig_q", rep.min_eig_q},
                  {"min_eig_f", rep.min_eig_f},
                  {"sum_eta", rep.sum_eta}};
        write_output(j, out_path);
    } else if (gap_cmd->parsed()) {
        auto rows = cclp::gap_report(gap_ns);
        json j = {{"schema_version", kSchemaVersion}, {"rows", json::array()}};
        std::string csv = "n,vertices,star_cost,frac_num,frac_den,ratio_num,ratio_den,opt,lp\n";
        for (const auto& r : rows) {
            json row = {{"n", r.n},
                        {"vertices", r.vertices},
                        {"star_cost", r.star_cost},
                        {"fractional", {{"num", r.frac_num}, {"den", r.frac_den}}},
                        {"ratio", {{"num", r.ratio_num}, {"den", r.ratio_den}}}};
            if (r.opt) row["opt"] = *r.opt;
            if (r.lp_value) row["lp"] = *r.lp_value;
            j["rows"].push_back(row);
            csv += std::to_string(r.n) + "," + std::to_string(r.vertices) + "," +
                   std::to_string(r.star_cost) + "," + std::to_string(r.frac_num) + "," +
                   std::to_string(r.frac_den) + "," + std::to_string(r.ratio_num) + "," +
                   std::to_string(r.ratio_den) + "," +
                   (r.opt ? std::to_string(*r.opt) : "") + "," +
                   (r.lp_value ? std::to_string(*r.lp_value) : "") + "\n";
        }
        write_output(j, out_path);
        if (!csv_path.empty()) {
            std::ofstream out(csv_path);
            if (!out) throw cclp::ValidationError("cannot open output file: " + csv_path);
            out << csv;
        }
    } else if (repro_cmd->parsed()) {
        bool smoke = level == "smoke";
        bool all = true;
        json manifest = {{"schema_version", kSchemaVersion},
                         {"mode", level},
                         {"criteria", json::array()}};
        for (const auto& r : cclp::run_criteria(smoke)) {
            all = all && r.pass;
            std::printf("%s %s  [%6.1fs]  %s\n", r.id.c_str(), r.pass ? "PASS" : "FAIL",
                        r.seconds, r.detail.c_str());
            std::fflush(stdout);
            manifest["criteria"].push_back(
                {{"id", r.id}, {"pass", r.pass}, {"seconds", r.seconds}, {"detail", r.detail}});
        }
        manifest["pass"] = all;
        if (!out_path.empty()) write_output(manifest, out_path);
        if (!all) return 4;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const cclp::CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const cclp::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const cclp::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    }
}
