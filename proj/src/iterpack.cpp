#include "packlab/iterpack.hpp"

#include <algorithm>
#include <climits>
#include <set>

#include "packlab/error.hpp"
#include "packlab/ratlp.hpp"

namespace packlab {

namespace {

// Can solution take edge S without violating any of S's endpoints?
bool accommodates(const Instance& inst, const IntegralSolution& sol, const Edge& S) {
    for (const auto& ep : S.endpoints)
        if (integral_load(inst, sol, ep.vertex) + ep.demand > inst.capacity(ep.vertex)) return false;
    return true;
}

long min_endpoint_demand(const Edge& e) {
    long d = LONG_MAX;
    for (const auto& ep : e.endpoints) d = std::min(d, ep.demand);
    return d;
}

}  // namespace

ConvexDecomposition pack_edge(const Instance& inst, const ConvexDecomposition& decomp,
                              const std::string& edge_id, const Rat& target) {
    const Edge& S = inst.edge(edge_id);
    if (target < 0 || target > 1) throw Error(ErrorCode::ParseError, "target outside [0,1]");
    for (const auto& t : decomp.terms())
        if (t.solution.count(edge_id))
            throw Error(ErrorCode::ParseError, "edge " + edge_id + " already present in decomposition");
    if (target == 0) return decomp;

    // Accommodating terms in decreasing multiplier order, ties by position.
    std::vector<size_t> candidates;
    for (size_t i = 0; i < decomp.size(); ++i)
        if (accommodates(inst, decomp.terms()[i].solution, S)) candidates.push_back(i);
    std::stable_sort(candidates.begin(), candidates.end(), [&](size_t a, size_t b) {
        return decomp.terms()[a].lambda > decomp.terms()[b].lambda;
    });

    // Whole multipliers first, then split exactly one term for the remainder.
    Rat remaining = target;
    std::set<size_t> take_whole;
    std::optional<size_t> split;
    Rat split_mass;
    for (size_t i : candidates) {
        if (remaining == 0) break;
        const Rat& lam = decomp.terms()[i].lambda;
        if (lam <= remaining) {
            take_whole.insert(i);
            remaining -= lam;
        } else {
            split = i;
            split_mass = remaining;
            remaining = 0;
        }
    }
    if (remaining > 0)
        throw Error(ErrorCode::InsufficientRoom,
                    "cannot pack " + edge_id + " to fraction " + rat_str(target));

    std::vector<DecompTerm> out;
    for (size_t i = 0; i < decomp.size(); ++i) {
        const DecompTerm& t = decomp.terms()[i];
        if (take_whole.count(i)) {
            DecompTerm with = t;
            with.solution.insert(edge_id);
            out.push_back(std::move(with));
        } else if (split && *split == i) {
            DecompTerm with{split_mass, t.solution};
            with.solution.insert(edge_id);
            out.push_back(std::move(with));
            out.push_back({t.lambda - split_mass, t.solution});
        } else {
            out.push_back(t);
        }
    }
    return ConvexDecomposition(std::move(out));
}

std::vector<std::string> monotone_removal_order(const Instance& inst) {
    std::vector<std::string> ids;
    for (const auto& e : inst.edges()) ids.push_back(e.id);
    std::sort(ids.begin(), ids.end());

    // A must precede B iff d^A_u < d^B_u at some shared vertex u.
    std::map<std::string, std::set<std::string>> succ;
    std::map<std::string, int> indeg;
    for (const auto& id : ids) indeg[id] = 0;
    for (size_t a = 0; a < ids.size(); ++a) {
        const Edge& A = inst.edge(ids[a]);
        for (size_t b = a + 1; b < ids.size(); ++b) {
            const Edge& B = inst.edge(ids[b]);
            bool ab = false, ba = false;
            for (const auto& ep : A.endpoints) {
                long db = B.demand_at(ep.vertex);
                if (db == 0) continue;
                if (ep.demand < db) ab = true;
                if (db < ep.demand) ba = true;
            }
            if (ab && succ[A.id].insert(B.id).second) ++indeg[B.id];
            if (ba && succ[B.id].insert(A.id).second) ++indeg[A.id];
        }
    }

    // Kahn with (min demand, id) priority; for uniform demands this is
    // exactly ascending d_S with ties by id.
    std::set<std::pair<std::pair<long, std::string>, std::string>> avail;
    auto key = [&](const std::string& id) {
        return std::make_pair(std::make_pair(min_endpoint_demand(inst.edge(id)), id), id);
    };
    for (const auto& id : ids)
        if (indeg[id] == 0) avail.insert(key(id));
    std::vector<std::string> order;
    while (!avail.empty()) {
        std::string id = avail.begin()->second;
        avail.erase(avail.begin());
        order.push_back(id);
        for (const auto& nxt : succ[id])
            if (--indeg[nxt] == 0) avail.insert(key(nxt));
    }
    if (order.size() != ids.size())
        throw Error(ErrorCode::NotMonotoneOrderable, "demand order has a cycle");
    return order;
}

BlockingAudit blocking_audit(const Instance& inst, const ConvexDecomposition& decomp,
                             const std::string& edge_id, const Rat& x_star_S, const Rat& alpha,
                             long delta_bar) {
    const Edge& S = inst.edge(edge_id);
    BlockingAudit audit;
    audit.edge = edge_id;
    Rat beta_sum = 0;
    for (const auto& ep : S.endpoints) {
        EndpointAudit ea;
        ea.vertex = ep.vertex;
        ea.beta = 0;
        long b_u = inst.capacity(ep.vertex);
        for (const auto& t : decomp.terms()) {
            long h = integral_load(inst, t.solution, ep.vertex);
            ea.bins.push_back({t.lambda, h});
            if (h + ep.demand > b_u) ea.beta += t.lambda;
        }
        long denom = std::max(b_u - ep.demand + 1, delta_bar);
        ea.bound = alpha * (Rat(b_u) - Rat(ep.demand) * x_star_S) / Rat(denom);
        beta_sum += ea.beta;
        audit.endpoints.push_back(std::move(ea));
    }
    audit.room = Rat(1) - beta_sum;
    audit.required = alpha * x_star_S;
    audit.condition_holds = audit.room >= audit.required;
    return audit;
}

ConvexDecomposition iterative_pack(const Instance& inst, const FractionalSolution& x_star,
                                   const Rat& alpha, const std::vector<std::string>& removal_order,
                                   const AuditHook& audit) {
    if (alpha <= 0 || alpha > 1) throw Error(ErrorCode::ParseError, "alpha outside (0,1]");
    for (const auto& id : x_star.support())
        if (std::find(removal_order.begin(), removal_order.end(), id) == removal_order.end())
            throw Error(ErrorCode::ParseError, "removal order misses support edge " + id);

    ConvexDecomposition decomp = ConvexDecomposition::trivial();
    std::vector<std::string> inserted;  // residual instance during insertion
    for (auto it = removal_order.rbegin(); it != removal_order.rend(); ++it) {
        const std::string& id = *it;
        Rat xs = x_star.value(id);
        if (xs == 0) continue;
        if (audit) {
            long delta_bar = LONG_MAX;
            for (const auto& rid : inserted)
                delta_bar = std::min(delta_bar, min_endpoint_demand(inst.edge(rid)));
            if (delta_bar == LONG_MAX) delta_bar = 1;
            audit(blocking_audit(inst, decomp, id, xs, alpha, delta_bar));
        }
        decomp = pack_edge(inst, decomp, id, alpha * xs);
        inserted.push_back(id);
    }
    return decomp;
}

IntegralSolution best_solution(const Instance& inst, const ConvexDecomposition& decomp) {
    IntegralSolution best;
    Rat best_cost = 0;
    bool first = true;
    for (const auto& t : decomp.terms()) {
        Rat c = solution_cost(inst, t.solution);
        if (first || c > best_cost) {
            best = t.solution;
            best_cost = c;
            first = false;
        }
    }
    return best;
}

namespace {

PackOutcome run_driver(const Instance& inst, const Rat& alpha, const std::vector<std::string>& order,
                       const AuditHook& audit) {
    LinearProgram lp = build_natural_relaxation(inst);
    LpResult res = solve_lp(lp);
    PackOutcome out;
    out.alpha = alpha;
    out.x_star = lp_solution_to_fractional(lp, res);
    out.lp_objective = res.objective;
    out.decomposition = iterative_pack(inst, out.x_star, alpha, order, audit);
    out.best = best_solution(inst, out.decomposition);
    return out;
}

}  // namespace

PackOutcome khdm_2k(const Instance& inst, const AuditHook& audit) {
    std::vector<std::string> order = monotone_removal_order(inst);
    return run_driver(inst, Rat(1, 2 * inst.k()), order, audit);
}

PackOutcome bmatching_pack(const Instance& inst, const AuditHook& audit) {
    if (!inst.all_unit_demand()) throw Error(ErrorCode::NonUnitDemand, "bmatching_pack needs unit demands");
    std::vector<std::string> order = monotone_removal_order(inst);
    return run_driver(inst, Rat(1, inst.k() + 1), order, audit);
}

PackOutcome matching_pack(const Instance& inst, const FractionalSolution& x_star, const AuditHook& audit) {
    if (inst.k() > 2 || !inst.all_unit_demand())
        throw Error(ErrorCode::NotMatchingInstance, "matching_pack needs k = 2 and unit demands");
    for (const auto& v : inst.vertices())
        if (v.capacity != 1) throw Error(ErrorCode::NotMatchingInstance, "matching_pack needs unit capacities");
    if (!fractional_feasible(inst, x_star))
        throw Error(ErrorCode::ParseError, "x* is not fractionally feasible");

    bool half_integral = true;
    for (const auto& [id, v] : x_star.values())
        if (v != 0 && v != Rat(1, 2) && v != 1) half_integral = false;
    Rat alpha = half_integral ? Rat(2, 3) : Rat(1, 2);

    std::vector<std::string> order;
    for (const auto& e : inst.edges()) order.push_back(e.id);
    std::sort(order.begin(), order.end());

    PackOutcome out;
    out.alpha = alpha;
    out.x_star = x_star;
    Rat cx = 0;
    for (const auto& [id, v] : x_star.values()) cx += inst.edge(id).weight * v;
    out.lp_objective = cx;
    out.decomposition = iterative_pack(inst, x_star, alpha, order, audit);
    out.best = best_solution(inst, out.decomposition);
    return out;
}

}  // namespace packlab
