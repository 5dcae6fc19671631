#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "packlab/core.hpp"
#include "packlab/decomp.hpp"
#include "packlab/iterpack.hpp"
#include "packlab/oracle.hpp"
#include "packlab/ratlp.hpp"

using json = nlohmann::json;
using namespace packlab;

namespace {

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Instance load_instance(const std::string& path) { return parse_instance(slurp(path)); }

void emit(const json& j) { std::cout << j.dump() << "\n"; }

json solution_json(const IntegralSolution& sol) {
    json arr = json::array();
    for (const auto& id : sol) arr.push_back(id);
    return arr;
}

json fractional_json(const FractionalSolution& x) {
    json obj = json::object();
    for (const auto& [id, v] : x.values()) obj[id] = rat_str(v);
    return obj;
}

json audit_json(const BlockingAudit& a) {
    json eps = json::array();
    for (const auto& ep : a.endpoints) {
        json bins = json::array();
        for (const auto& b : ep.bins) bins.push_back({{"multiplier", rat_str(b.multiplier)}, {"height", b.height}});
        eps.push_back({{"vertex", ep.vertex},
                       {"beta", rat_str(ep.beta)},
                       {"bound", rat_str(ep.bound)},
                       {"bins", bins}});
    }
    return {{"edge", a.edge},
            {"endpoints", eps},
            {"room", rat_str(a.room)},
            {"required", rat_str(a.required)},
            {"condition_holds", a.condition_holds}};
}

size_t env_budget() {
    const char* s = std::getenv("PACKLAB_MAX_ITERS");
    if (!s || !*s) return 0;
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (*end || v <= 0) throw Error(ErrorCode::ParseError, "bad PACKLAB_MAX_ITERS value");
    return static_cast<size_t>(v);
}

json pack_outcome_json(const PackOutcome& out, const std::vector<BlockingAudit>* audits) {
    json j{{"alpha", rat_str(out.alpha)},
           {"lp_objective", rat_str(out.lp_objective)},
           {"x_star", fractional_json(out.x_star)},
           {"best", solution_json(out.best)},
           {"decomposition", decomposition_to_json(out.decomposition, out.alpha)}};
    if (audits) {
        json arr = json::array();
        for (const auto& a : *audits) arr.push_back(audit_json(a));
        j["audits"] = arr;
    }
    return j;
}

int cmd_validate(const std::string& file) {
    Instance inst = load_instance(file);
    emit({{"valid", true},
          {"vertices", inst.vertices().size()},
          {"edges", inst.edges().size()},
          {"k", inst.k()}});
    return 0;
}

int cmd_lp(const std::string& file, const std::string& costs_file) {
    Instance inst = load_instance(file);
    std::optional<std::map<std::string, Rat>> costs;
    if (!costs_file.empty()) {
        json cj = json::parse(slurp(costs_file));
        std::map<std::string, Rat> m;
        for (auto it = cj.begin(); it != cj.end(); ++it)
            m[it.key()] = it->is_string() ? parse_rat(it->get<std::string>()) : Rat(it->get<long>());
        costs = std::move(m);
    }
    LinearProgram lp = build_natural_relaxation(inst, costs);
    LpResult res = solve_lp(lp);
    json x = json::object(), duals = json::object();
    for (size_t j = 0; j < lp.num_vars(); ++j) x[lp.var_names[j]] = rat_str(res.x[j]);
    for (size_t i = 0; i < lp.num_rows(); ++i) duals[lp.row_names[i]] = rat_str(res.duals[i]);
    emit({{"objective", rat_str(res.objective)}, {"x", x}, {"duals", duals}});
    return 0;
}

int cmd_approx(const std::string& mode, const std::string& file, bool audit) {
    Instance inst = load_instance(file);
    std::vector<BlockingAudit> audits;
    AuditHook hook = nullptr;
    if (audit) hook = [&audits](const BlockingAudit& a) { audits.push_back(a); };

    if (mode == "twocs") {
        TwoCsResult res = two_cs_pip_3approx(inst, env_budget());
        emit({{"alpha", rat_str(res.certificate.alpha)},
              {"lp_objective", rat_str(res.certificate.lp_objective)},
              {"best", solution_json(res.best)},
              {"best_cost", rat_str(res.certificate.best_cost)},
              {"ratio", rat_str(res.certificate.ratio)},
              {"solutions", res.certificate.solutions},
              {"iterations", res.certificate.iterations},
              {"x_hat", fractional_json(res.x_hat)},
              {"decomposition", decomposition_to_json(res.decomposition, res.certificate.alpha)}});
        return 0;
    }

    PackOutcome out;
    if (mode == "khdm") {
        out = khdm_2k(inst, hook);
    } else if (mode == "bmatching") {
        out = bmatching_pack(inst, hook);
    } else if (mode == "matching") {
        LinearProgram lp = build_natural_relaxation(inst);
        LpResult res = solve_lp(lp);
        out = matching_pack(inst, lp_solution_to_fractional(lp, res), hook);
    } else {
        throw CLI::ValidationError("approx", "unknown mode " + mode);
    }
    json j = pack_outcome_json(out, audit ? &audits : nullptr);
    j["best_cost"] = rat_str(solution_cost(inst, out.best));
    emit(j);
    return 0;
}

int cmd_decompose(const std::string& file, const std::string& alpha_text) {
    Instance inst = load_instance(file);
    Rat alpha = parse_rat(alpha_text);
    LinearProgram lp = build_natural_relaxation(inst);
    LpResult res = solve_lp(lp);
    FractionalSolution x = lp_solution_to_fractional(lp, res);
    ConvexDecomposition d = iterative_pack(inst, x, alpha, monotone_removal_order(inst));
    emit(decomposition_to_json(d, alpha));
    return 0;
}

int cmd_oracle(const std::string& file, size_t max_edges) {
    Instance inst = load_instance(file);
    IntegralSolution best = brute_force_opt(inst, max_edges);
    emit({{"solution", solution_json(best)}, {"cost", rat_str(solution_cost(inst, best))}});
    return 0;
}

json gap_json(const GapReport& rep) {
    return {{"lp_optimum", rat_str(rep.lp_optimum)},
            {"ip_optimum", rat_str(rep.ip_optimum)},
            {"gap", rat_str(rep.gap)},
            {"infinite", rep.infinite},
            {"extreme_point", fractional_json(rep.extreme_point)},
            {"optimal_solution", solution_json(rep.optimal_solution)}};
}

int cmd_gap(const std::string& file, size_t max_edges, int trials, int jobs, const RandomSpec& base) {
    if (trials <= 0) {
        emit(gap_json(integrality_gap(load_instance(file), max_edges)));
        return 0;
    }
    // Independent random trials with per-trial seeds, optionally in parallel.
    std::vector<json> rows(trials);
    auto run_range = [&](int lo, int hi) {
        for (int t = lo; t < hi; ++t) {
            RandomSpec spec = base;
            spec.seed = base.seed + static_cast<std::uint64_t>(t);
            GapReport rep = integrality_gap(gen_random(spec), max_edges);
            rows[t] = {{"seed", spec.seed}, {"gap", rat_str(rep.gap)},
                       {"lp_optimum", rat_str(rep.lp_optimum)}, {"ip_optimum", rat_str(rep.ip_optimum)}};
        }
    };
    jobs = std::max(1, jobs);
    std::vector<std::future<void>> futs;
    int chunk = (trials + jobs - 1) / jobs;
    for (int j = 0; j < jobs; ++j) {
        int lo = j * chunk, hi = std::min(trials, lo + chunk);
        if (lo >= hi) break;
        futs.push_back(std::async(std::launch::async, run_range, lo, hi));
    }
    for (auto& f : futs) f.get();
    json arr = json::array();
    for (auto& r : rows) arr.push_back(std::move(r));
    emit({{"trials", trials}, {"results", arr}});
    return 0;
}

int cmd_verify(const std::string& inst_file, const std::string& decomp_file, const std::string& alpha_text) {
    Instance inst = load_instance(inst_file);
    auto [decomp, file_alpha] = decomposition_from_json(json::parse(slurp(decomp_file)));
    Rat alpha = parse_rat(alpha_text);
    std::vector<std::string> violations;
    if (file_alpha != alpha) violations.push_back("alpha mismatch");
    if (decomp.total_mass() != 1) violations.push_back("multipliers do not sum to 1");
    for (const auto& term : decomp.terms()) {
        if (term.lambda <= 0) violations.push_back("nonpositive multiplier");
        for (const auto& id : term.solution)
            if (!inst.has_edge(id)) violations.push_back("unknown edge " + id);
        if (!is_feasible(inst, term.solution)) violations.push_back("infeasible solution in decomposition");
    }
    if (violations.empty() && alpha > 0) {
        // The decomposed vector must be alpha times a point of the relaxation.
        FractionalSolution x;
        FractionalSolution vv = decomp.value_vector();
        for (const auto& [id, v] : vv.values()) {
            Rat scaled = v / alpha;
            scaled.canonicalize();
            x.set(id, scaled);
        }
        if (!x.in_unit_box()) violations.push_back("value vector exceeds alpha times the unit box");
        else if (!fractional_feasible(inst, x)) violations.push_back("value vector / alpha violates capacities");
    }
    if (!violations.empty()) {
        emit({{"ok", false}, {"violations", violations}});
        return 1;
    }
    emit({{"ok", true}, {"terms", decomp.size()}, {"alpha", rat_str(alpha)}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact convex decompositions and approximations for column-sparse packing programs"};
    app.require_subcommand(1);

    std::string file, costs_file, mode, alpha_text, decomp_file;
    bool audit = false;
    size_t max_edges = 20;

    auto* validate = app.add_subcommand("validate", "Parse and validate an instance");
    validate->add_option("file", file, "instance JSON ('-' for stdin)")->required();

    auto* lp = app.add_subcommand("lp", "Solve the natural LP relaxation exactly");
    lp->add_option("file", file)->required();
    lp->add_option("--costs", costs_file, "objective override, JSON edge->rational");

    auto* approx = app.add_subcommand("approx", "Run an approximation pipeline");
    approx->add_option("mode", mode, "khdm | bmatching | matching | twocs")
        ->required()
        ->check(CLI::IsMember({"khdm", "bmatching", "matching", "twocs"}));
    approx->add_option("file", file)->required();
    approx->add_flag("--audit", audit, "include per-insertion blocking audits");

    auto* decompose = app.add_subcommand("decompose", "Alpha-approximate convex decomposition of the LP optimum");
    decompose->add_option("file", file)->required();
    decompose->add_option("--alpha", alpha_text, "scaling factor p/q")->required();

    auto* oracle = app.add_subcommand("oracle", "Brute-force integer optimum");
    oracle->add_option("file", file)->required();
    oracle->add_option("--max-edges", max_edges, "enumeration size limit");

    auto* gap = app.add_subcommand("gap", "Exact integrality gap (LP / brute-force IP)");
    gap->add_option("file", file);
    gap->add_option("--max-edges", max_edges);
    int trials = 0, jobs = 1;
    RandomSpec rspec;
    gap->add_option("--trials", trials, "run N random instances instead of a file");
    gap->add_option("--jobs", jobs, "parallel workers for --trials");
    gap->add_option("--seed", rspec.seed);
    gap->add_option("--k", rspec.k);
    gap->add_option("--n", rspec.n_vertices);
    gap->add_option("--m", rspec.m_edges);

    auto* gen = app.add_subcommand("gen", "Generate an instance");
    gen->require_subcommand(1);
    long gen_d = 2, gen_q = 1, star_cap = 1;
    auto* tri = gen->add_subcommand("triangle", "triangle gap instance T_d");
    tri->add_option("--d", gen_d, "uniform demand")->required();
    auto* plane = gen->add_subcommand("plane", "projective plane gap instance");
    plane->add_option("--q", gen_q, "plane order (1 or prime)")->required();
    plane->add_option("--d", gen_d, "uniform demand")->required();
    auto* rnd = gen->add_subcommand("random", "seeded random instance");
    rnd->add_option("--k", rspec.k);
    rnd->add_option("--n", rspec.n_vertices);
    rnd->add_option("--m", rspec.m_edges);
    rnd->add_option("--max-demand", rspec.max_demand);
    rnd->add_option("--max-capacity", rspec.max_capacity);
    rnd->add_option("--max-weight", rspec.max_weight);
    rnd->add_flag("--uniform", rspec.uniform_demand);
    rnd->add_option("--seed", rspec.seed)->required();
    auto* star = gen->add_subcommand("star", "star knapsack instance");
    std::vector<long> star_demands;
    std::vector<std::string> star_weights;
    star->add_option("--capacity", star_cap, "center capacity")->required();
    star->add_option("--demands", star_demands, "item demands")->required();
    star->add_option("--weights", star_weights, "item weights (rationals)")->required();

    auto* verify = app.add_subcommand("verify", "Check a decomposition against an instance");
    verify->add_option("instance", file)->required();
    verify->add_option("decomposition", decomp_file)->required();
    verify->add_option("--alpha", alpha_text)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) return cmd_validate(file);
        if (lp->parsed()) return cmd_lp(file, costs_file);
        if (approx->parsed()) return cmd_approx(mode, file, audit);
        if (decompose->parsed()) return cmd_decompose(file, alpha_text);
        if (oracle->parsed()) return cmd_oracle(file, max_edges);
        if (gap->parsed()) {
            if (trials <= 0 && file.empty())
                throw Error(ErrorCode::ParseError, "gap needs a file or --trials");
            return cmd_gap(file, max_edges, trials, jobs, rspec);
        }
        if (gen->parsed()) {
            if (tri->parsed()) emit(instance_to_json(gen_projective_plane(1, gen_d)));
            else if (plane->parsed()) emit(instance_to_json(gen_projective_plane(gen_q, gen_d)));
            else if (rnd->parsed()) emit(instance_to_json(gen_random(rspec)));
            else {
                std::vector<Rat> weights;
                for (const auto& w : star_weights) weights.push_back(parse_rat(w));
                emit(instance_to_json(gen_star_knapsack(star_cap, star_demands, weights)));
            }
            return 0;
        }
        if (verify->parsed()) return cmd_verify(file, decomp_file, alpha_text);
    } catch (const Error& e) {
        emit({{"error", error_code_name(e.code())}, {"detail", e.detail()}});
        return 1;
    } catch (const json::exception& e) {
        emit({{"error", "parse_error"}, {"detail", e.what()}});
        return 1;
    } catch (const std::exception& e) {
        emit({{"error", "parse_error"}, {"detail", e.what()}});
        return 1;
    }
    return 2;
}
