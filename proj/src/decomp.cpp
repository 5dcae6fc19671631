#include "packlab/decomp.hpp"

#include <algorithm>

#include "packlab/error.hpp"
#include "packlab/iterpack.hpp"
#include "packlab/ratlp.hpp"

namespace packlab {

size_t default_iteration_budget(size_t support_size) { return 50 * support_size + 50; }

CoverageDecomposition carr_vempala(const Instance& inst, const FractionalSolution& x_bar, long r,
                                   const PointOracle& oracle, size_t budget,
                                   std::vector<MasterState>* trace) {
    std::vector<std::string> supp = x_bar.support();
    if (budget == 0) budget = default_iteration_budget(supp.size());

    CoverageDecomposition out;
    for (const auto& e : supp) {
        out.target[e] = x_bar.value(e) / Rat(r);
        out.target[e].canonicalize();
    }
    if (supp.empty()) {
        out.decomposition = ConvexDecomposition::trivial();
        out.exact = true;
        return out;
    }

    std::vector<IntegralSolution> columns{{}};  // start from the empty solution
    Rat prev_t = 0;
    for (size_t iter = 1; iter <= budget; ++iter) {
        // Master: max t  s.t.  (x_e/r) t - sum_j chi^j_e lambda_j <= 0,
        //         sum_j lambda_j <= 1,  0 <= t <= 1,  0 <= lambda <= 1.
        LinearProgram lp;
        size_t ncols = 1 + columns.size();
        lp.objective.assign(ncols, Rat(0));
        lp.objective[0] = 1;
        lp.upper.assign(ncols, Rat(1));
        for (const auto& e : supp) {
            std::vector<Rat> row(ncols, Rat(0));
            row[0] = x_bar.value(e) / Rat(r);
            for (size_t j = 0; j < columns.size(); ++j)
                if (columns[j].count(e)) row[1 + j] = -1;
            lp.rows.push_back(std::move(row));
            lp.rhs.push_back(Rat(0));
        }
        {
            std::vector<Rat> conv(ncols, Rat(1));
            conv[0] = 0;
            lp.rows.push_back(std::move(conv));
            lp.rhs.push_back(Rat(1));
        }
        LpResult res = solve_lp(lp);
        Rat t = res.x[0];
        if (t < prev_t)
            throw Error(ErrorCode::InternalInvariantViolation, "master objective decreased");
        prev_t = t;

        CostMap y;
        for (size_t i = 0; i < supp.size(); ++i) y[supp[i]] = res.duals[i];
        Rat sigma = res.duals[supp.size()];
        if (trace) trace->push_back({columns, t, y, sigma, iter});

        if (t >= 1) {
            std::vector<DecompTerm> terms;
            Rat mass = 0;
            for (size_t j = 0; j < columns.size(); ++j) {
                if (res.x[1 + j] == 0) continue;
                terms.push_back({res.x[1 + j], columns[j]});
                mass += res.x[1 + j];
            }
            if (mass < 1) terms.push_back({Rat(1) - mass, {}});
            out.decomposition = ConvexDecomposition(std::move(terms));
            out.decomposition.normalize();
            out.iterations = iter;
            // Domination is scaled by t; t >= 1 gives value(e) >= x_e/r.
            return out;
        }

        IntegralSolution z = oracle(y);
        if (!is_feasible(inst, z))
            throw Error(ErrorCode::OracleGuaranteeViolated, "oracle returned an infeasible column");
        Rat yz = cost_dot(y, z);
        Rat yx = cost_dot(y, x_bar);
        if (yz * Rat(r) < yx)
            throw Error(ErrorCode::OracleGuaranteeViolated,
                        "column value " + rat_str(yz) + " below (y.x)/r = " + rat_str(yx / Rat(r)));
        if (yz <= sigma)
            throw Error(ErrorCode::OracleGuaranteeViolated,
                        "column has nonpositive reduced cost while t < 1");
        columns.push_back(std::move(z));
    }
    throw Error(ErrorCode::IterationLimit, "column generation budget exhausted");
}

CoverageDecomposition exact_repair(const Instance& inst, const CoverageDecomposition& cover) {
    CoverageDecomposition out = cover;
    std::vector<DecompTerm> terms = cover.decomposition.terms();
    for (const auto& [e, tgt] : out.target) {
        Rat cur = 0;
        for (const auto& t : terms)
            if (t.solution.count(e)) cur += t.lambda;
        if (cur < tgt)
            throw Error(ErrorCode::InternalInvariantViolation, "cover does not dominate target at " + e);
        if (cur == tgt) continue;
        std::vector<DecompTerm> next;
        for (auto& t : terms) {
            if (!t.solution.count(e) || cur == tgt) {
                next.push_back(std::move(t));
                continue;
            }
            if (cur - t.lambda >= tgt) {
                // Drop e from this whole term; removal keeps it feasible.
                cur -= t.lambda;
                t.solution.erase(e);
                next.push_back(std::move(t));
            } else {
                // Split: keep e on (lambda - excess), shed it on the excess clone.
                Rat excess = cur - tgt;
                DecompTerm keep{t.lambda - excess, t.solution};
                DecompTerm shed{excess, t.solution};
                shed.solution.erase(e);
                if (keep.lambda > 0) next.push_back(std::move(keep));
                next.push_back(std::move(shed));
                cur = tgt;
            }
        }
        terms = std::move(next);
    }
    out.decomposition = ConvexDecomposition(std::move(terms));
    out.decomposition.normalize();
    out.exact = true;
    return out;
}

TwoCsResult two_cs_pip_3approx(const Instance& inst, size_t budget) {
    if (inst.k() > 2) throw Error(ErrorCode::NotRankTwo, "pipeline needs k = 2");
    if (inst.has_parallel_edges()) throw Error(ErrorCode::ParallelEdges, "pipeline rejects parallel edges");

    LinearProgram lp = build_natural_relaxation(inst);
    LpResult res = solve_lp(lp);
    FractionalSolution x_hat = lp_solution_to_fractional(lp, res);

    // Peel 1-edges (ascending id), keep the strictly fractional rest.
    std::vector<std::string> one_edges;
    FractionalSolution x_bar;
    for (const auto& [id, v] : x_hat.values()) {
        if (v == 1)
            one_edges.push_back(id);
        else
            x_bar.set(id, v);
    }
    std::sort(one_edges.begin(), one_edges.end());

    auto oracle = [&](const CostMap& y) { return point_oracle3(inst, x_bar, y); };
    CoverageDecomposition cover = carr_vempala(inst, x_bar, 3, oracle, budget);
    CoverageDecomposition repaired = exact_repair(inst, cover);

    ConvexDecomposition d = repaired.decomposition;
    for (auto it = one_edges.rbegin(); it != one_edges.rend(); ++it)
        d = pack_edge(inst, d, *it, Rat(1, 3));

    TwoCsResult result;
    result.decomposition = d;
    result.best = best_solution(inst, d);
    result.x_hat = x_hat;
    result.certificate.lp_objective = res.objective;
    result.certificate.best_cost = solution_cost(inst, result.best);
    result.certificate.ratio =
        res.objective == 0 ? Rat(0) : Rat(result.certificate.best_cost / res.objective);
    result.certificate.ratio.canonicalize();
    result.certificate.alpha = Rat(1, 3);
    result.certificate.solutions = d.size();
    result.certificate.iterations = cover.iterations;
    return result;
}

}  // namespace packlab
