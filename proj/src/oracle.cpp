#include "packlab/oracle.hpp"

#include <algorithm>
#include <array>
#include <random>

#include "packlab/error.hpp"
#include "packlab/ratlp.hpp"

namespace packlab {

namespace {

struct BruteState {
    const Instance* inst;
    std::vector<const Edge*> edges;
    std::vector<Rat> suffix_weight;
    std::vector<std::string> chosen;
    std::map<std::string, long> load;
    Rat cost = 0;
    Rat best_cost = 0;
    std::vector<std::string> best;
    bool have_best = false;
};

void brute_dfs(BruteState& st, size_t i) {
    if (st.have_best && st.cost + st.suffix_weight[i] < st.best_cost) return;
    if (i == st.edges.size()) {
        if (!st.have_best || st.cost > st.best_cost ||
            (st.cost == st.best_cost && st.chosen < st.best)) {
            st.best_cost = st.cost;
            st.best = st.chosen;
            st.have_best = true;
        }
        return;
    }
    const Edge& e = *st.edges[i];
    bool fits = true;
    for (const auto& ep : e.endpoints)
        if (st.load[ep.vertex] + ep.demand > st.inst->capacity(ep.vertex)) fits = false;
    if (fits) {
        for (const auto& ep : e.endpoints) st.load[ep.vertex] += ep.demand;
        st.chosen.push_back(e.id);
        st.cost += e.weight;
        brute_dfs(st, i + 1);
        st.cost -= e.weight;
        st.chosen.pop_back();
        for (const auto& ep : e.endpoints) st.load[ep.vertex] -= ep.demand;
    }
    brute_dfs(st, i + 1);
}

bool is_prime(long q) {
    if (q < 2) return false;
    for (long p = 2; p * p <= q; ++p)
        if (q % p == 0) return false;
    return true;
}

// Seed-stable uniform draw in [lo, hi].
long draw(std::mt19937_64& rng, long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

IntegralSolution brute_force_opt(const Instance& inst, size_t edge_limit) {
    if (inst.edges().size() > edge_limit)
        throw Error(ErrorCode::TooLarge, std::to_string(inst.edges().size()) + " edges exceed limit " +
                                             std::to_string(edge_limit));
    BruteState st;
    st.inst = &inst;
    for (const auto& e : inst.edges()) st.edges.push_back(&e);
    std::sort(st.edges.begin(), st.edges.end(),
              [](const Edge* a, const Edge* b) { return a->id < b->id; });
    st.suffix_weight.assign(st.edges.size() + 1, Rat(0));
    for (size_t i = st.edges.size(); i > 0; --i)
        st.suffix_weight[i - 1] = st.suffix_weight[i] + st.edges[i - 1]->weight;
    brute_dfs(st, 0);
    return IntegralSolution(st.best.begin(), st.best.end());
}

GapReport integrality_gap(const Instance& inst, size_t edge_limit) {
    GapReport rep;
    LinearProgram lp = build_natural_relaxation(inst);
    LpResult res = solve_lp(lp);
    rep.lp_optimum = res.objective;
    rep.extreme_point = lp_solution_to_fractional(lp, res);
    rep.optimal_solution = brute_force_opt(inst, edge_limit);
    rep.ip_optimum = solution_cost(inst, rep.optimal_solution);
    if (rep.ip_optimum == 0) {
        rep.infinite = rep.lp_optimum > 0;
        rep.gap = 0;
    } else {
        rep.gap = rep.lp_optimum / rep.ip_optimum;
        rep.gap.canonicalize();
    }
    return rep;
}

Instance gen_projective_plane(long q, long d) {
    if (d <= 0) throw Error(ErrorCode::ParseError, "demand must be positive");
    long b = 2 * d - 1;
    if (q == 1) {
        std::vector<Vertex> vs{{"p0", b}, {"p1", b}, {"p2", b}};
        std::vector<Edge> es;
        auto line = [&](const std::string& id, const std::string& a, const std::string& c) {
            es.push_back({id, {{a, d}, {c, d}}, Rat(1)});
        };
        line("L0", "p0", "p1");
        line("L1", "p1", "p2");
        line("L2", "p0", "p2");
        return Instance(std::move(vs), std::move(es));
    }
    if (!is_prime(q)) throw Error(ErrorCode::UnsupportedOrder, "order " + std::to_string(q) + " is not prime");

    // Normalized homogeneous triples over F_q, in lexicographic order.
    std::vector<std::array<long, 3>> triples;
    for (long x = 0; x < q; ++x)
        for (long y = 0; y < q; ++y)
            for (long z = 0; z < q; ++z) {
                std::array<long, 3> t{x, y, z};
                long lead = t[0] != 0 ? t[0] : (t[1] != 0 ? t[1] : t[2]);
                if (lead != 1) continue;  // keep first nonzero = 1
                if (t[0] == 0 && t[1] == 0 && t[2] == 0) continue;
                triples.push_back(t);
            }

    std::vector<Vertex> vs;
    for (size_t i = 0; i < triples.size(); ++i) vs.push_back({"p" + std::to_string(i), b});
    std::vector<Edge> es;
    for (size_t li = 0; li < triples.size(); ++li) {
        Edge e;
        e.id = "L" + std::to_string(li);
        e.weight = 1;
        for (size_t pi = 0; pi < triples.size(); ++pi) {
            long s = 0;
            for (int c = 0; c < 3; ++c) s += triples[li][c] * triples[pi][c];
            if (s % q == 0) e.endpoints.push_back({"p" + std::to_string(pi), d});
        }
        es.push_back(std::move(e));
    }
    return Instance(std::move(vs), std::move(es));
}

Instance gen_random(const RandomSpec& spec) {
    if (spec.k <= 0 || spec.n_vertices <= 0 || spec.m_edges < 0 || spec.max_demand <= 0 ||
        spec.max_capacity <= 0 || spec.max_weight <= 0)
        throw Error(ErrorCode::ParseError, "random spec parameters must be positive");
    if (spec.n_vertices < spec.k)
        throw Error(ErrorCode::ParseError, "need at least k vertices");

    std::mt19937_64 rng(spec.seed);
    std::vector<std::vector<Endpoint>> edge_eps;
    for (int e = 0; e < spec.m_edges; ++e) {
        std::vector<int> picked;
        while (static_cast<int>(picked.size()) < spec.k) {
            int v = static_cast<int>(draw(rng, 0, spec.n_vertices - 1));
            if (std::find(picked.begin(), picked.end(), v) == picked.end()) picked.push_back(v);
        }
        std::sort(picked.begin(), picked.end());
        std::vector<Endpoint> eps;
        long uniform = draw(rng, 1, spec.max_demand);
        for (int v : picked) {
            long dem = spec.uniform_demand ? uniform : draw(rng, 1, spec.max_demand);
            eps.push_back({"v" + std::to_string(v), dem});
        }
        edge_eps.push_back(std::move(eps));
    }

    std::vector<long> max_incident(spec.n_vertices, 0);
    for (const auto& eps : edge_eps)
        for (const auto& ep : eps) {
            int v = std::stoi(ep.vertex.substr(1));
            max_incident[v] = std::max(max_incident[v], ep.demand);
        }

    std::vector<Vertex> vs;
    for (int v = 0; v < spec.n_vertices; ++v) {
        long lo = std::max<long>(1, max_incident[v]);
        long hi = std::max<long>(spec.max_capacity, lo);
        vs.push_back({"v" + std::to_string(v), draw(rng, lo, hi)});
    }
    std::vector<Edge> es;
    for (int e = 0; e < spec.m_edges; ++e) {
        Edge ed;
        ed.id = "e" + std::to_string(e);
        ed.endpoints = edge_eps[e];
        ed.weight = draw(rng, 1, spec.max_weight);
        es.push_back(std::move(ed));
    }
    return Instance(std::move(vs), std::move(es));
}

Instance gen_star_knapsack(long capacity, const std::vector<long>& demands,
                           const std::vector<Rat>& weights) {
    if (demands.size() != weights.size())
        throw Error(ErrorCode::ParseError, "demands and weights must have equal length");
    for (long d : demands)
        if (d > capacity)
            throw Error(ErrorCode::ClippedItem, "demand " + std::to_string(d) + " exceeds capacity");
    std::vector<Vertex> vs{{"c", capacity}};
    std::vector<Edge> es;
    for (size_t i = 0; i < demands.size(); ++i) {
        std::string leaf = "v" + std::to_string(i + 1);
        vs.push_back({leaf, demands[i]});
        es.push_back({"e" + std::to_string(i + 1), {{"c", demands[i]}, {leaf, demands[i]}}, weights[i]});
    }
    return Instance(std::move(vs), std::move(es));
}

}  // namespace packlab
