#include "packlab/twocs.hpp"

#include <algorithm>
#include <set>

#include "packlab/error.hpp"

namespace packlab {

Rat cost_dot(const CostMap& costs, const FractionalSolution& x) {
    Rat s = 0;
    for (const auto& [id, v] : x.values()) s += cost_of(costs, id) * v;
    return s;
}

Rat cost_dot(const CostMap& costs, const IntegralSolution& sol) {
    Rat s = 0;
    for (const auto& id : sol) s += cost_of(costs, id);
    return s;
}

namespace {

// Rank-2 view of an edge. Single-endpoint edges get a private phantom
// leaf "~<id>" so the support is an ordinary graph.
struct GEdge {
    std::string id;
    std::string u, v;
    long du = 0, dv = 0;

    long demand_at(const std::string& w) const {
        if (w == u) return du;
        if (w == v) return dv;
        return 0;
    }
    std::string other(const std::string& w) const { return w == u ? v : u; }
};

bool is_phantom(const std::string& v) { return !v.empty() && v[0] == '~'; }

GEdge as_rank2(const Edge& e) {
    if (e.endpoints.size() > 2) throw Error(ErrorCode::NotRankTwo, "edge " + e.id + " has more than 2 endpoints");
    GEdge g;
    g.id = e.id;
    g.u = e.endpoints[0].vertex;
    g.du = e.endpoints[0].demand;
    if (e.endpoints.size() == 2) {
        g.v = e.endpoints[1].vertex;
        g.dv = e.endpoints[1].demand;
    } else {
        g.v = "~" + e.id;
        g.dv = e.endpoints[0].demand;
    }
    if (g.v < g.u) {
        std::swap(g.u, g.v);
        std::swap(g.du, g.dv);
    }
    return g;
}

struct DisjointSets {
    std::map<std::string, std::string> parent;

    std::string find(const std::string& x) {
        if (!parent.count(x)) parent[x] = x;
        if (parent[x] == x) return x;
        return parent[x] = find(parent[x]);
    }
    void unite(const std::string& a, const std::string& b) { parent[find(a)] = find(b); }
};

// Partition support edges into connected components, keyed by smallest edge id.
std::vector<std::vector<GEdge>> split_components(const std::vector<GEdge>& edges) {
    DisjointSets ds;
    for (const auto& g : edges) ds.unite(g.u, g.v);
    std::map<std::string, std::map<std::string, GEdge>> by_root;  // root -> id -> edge
    for (const auto& g : edges) by_root[ds.find(g.u)].emplace(g.id, g);
    std::map<std::string, std::vector<GEdge>> keyed;
    for (auto& [root, m] : by_root) {
        std::vector<GEdge> comp;
        for (auto& [id, g] : m) comp.push_back(g);
        keyed.emplace(comp.front().id, std::move(comp));
    }
    std::vector<std::vector<GEdge>> out;
    for (auto& [k, comp] : keyed) out.push_back(std::move(comp));
    return out;
}

std::set<std::string> component_vertices(const std::vector<GEdge>& comp) {
    std::set<std::string> vs;
    for (const auto& g : comp) {
        vs.insert(g.u);
        vs.insert(g.v);
    }
    return vs;
}

// Edges of the unique cycle, found by repeatedly pruning leaves.
std::vector<std::string> find_cycle(const std::vector<GEdge>& comp) {
    std::map<std::string, long> degree;
    std::map<std::string, std::vector<const GEdge*>> adj;
    std::set<std::string> removed;
    for (const auto& g : comp) {
        degree[g.u]++;
        degree[g.v]++;
        adj[g.u].push_back(&g);
        adj[g.v].push_back(&g);
    }
    std::set<std::string> queue;
    for (const auto& [v, d] : degree)
        if (d == 1) queue.insert(v);
    while (!queue.empty()) {
        std::string v = *queue.begin();
        queue.erase(queue.begin());
        for (const GEdge* g : adj[v]) {
            if (removed.count(g->id)) continue;
            removed.insert(g->id);
            std::string w = g->other(v);
            if (--degree[w] == 1) queue.insert(w);
        }
    }
    std::vector<std::string> cycle;
    for (const auto& g : comp)
        if (!removed.count(g.id)) cycle.push_back(g.id);
    std::sort(cycle.begin(), cycle.end());
    return cycle;
}

std::vector<GEdge> support_graph(const Instance& inst, const std::vector<std::string>& edge_ids) {
    std::vector<GEdge> out;
    for (const auto& id : edge_ids) out.push_back(as_rank2(inst.edge(id)));
    return out;
}

long capacity_of(const Instance& inst, const GEdge& g, const std::string& w) {
    if (is_phantom(w)) return g.demand_at(w);  // never overloads
    return inst.capacity(w);
}

}  // namespace

SupportStructure analyze_support(const Instance& inst, const FractionalSolution& x) {
    std::vector<std::string> frac;
    for (const auto& [id, v] : x.values())
        if (v > 0 && v < 1) frac.push_back(id);
    SupportStructure st;
    for (auto& comp : split_components(support_graph(inst, frac))) {
        SupportComponent sc;
        auto vs = component_vertices(comp);
        sc.vertices.assign(vs.begin(), vs.end());
        for (const auto& g : comp) sc.edges.push_back(g.id);
        std::sort(sc.edges.begin(), sc.edges.end());
        if (comp.size() + 1 == vs.size()) {
            sc.kind = ComponentKind::Tree;
        } else if (comp.size() == vs.size()) {
            sc.kind = ComponentKind::Unicyclic;
            sc.cycle_edges = find_cycle(comp);
        } else {
            sc.kind = ComponentKind::MultiCycle;
            st.multi_cycle = true;
        }
        st.components.push_back(std::move(sc));
    }
    return st;
}

std::vector<Rat> augmentation_vector(const Instance& inst, const Path& path) {
    if (path.edges.empty() || path.vertices.size() != path.edges.size() + 1)
        throw Error(ErrorCode::MalformedPath, "vertex/edge counts do not match");
    std::set<std::string> seen(path.edges.begin(), path.edges.end());
    if (seen.size() != path.edges.size()) throw Error(ErrorCode::MalformedPath, "repeated edge");
    for (size_t i = 0; i < path.edges.size(); ++i) {
        const Edge& e = inst.edge(path.edges[i]);
        if (e.endpoints.size() > 2) throw Error(ErrorCode::NotRankTwo, "edge " + e.id);
        if (!e.incident(path.vertices[i]) || (e.endpoints.size() == 2 && !e.incident(path.vertices[i + 1])))
            throw Error(ErrorCode::MalformedPath, "edge " + e.id + " not incident to listed vertices");
    }
    std::vector<Rat> z(path.edges.size());
    z[0] = 1;
    for (size_t i = 1; i < path.edges.size(); ++i) {
        const std::string& v = path.vertices[i];
        long d_prev = inst.edge(path.edges[i - 1]).demand_at(v);
        long d_next = inst.edge(path.edges[i]).demand_at(v);
        if (d_prev == 0 || d_next == 0)
            throw Error(ErrorCode::MalformedPath, "consecutive edges do not share vertex " + v);
        z[i] = -Rat(d_prev, d_next) * z[i - 1];
        z[i].canonicalize();
    }
    return z;
}

FractionalSolution trim_cycles(const Instance& inst, const FractionalSolution& x, const CostMap& costs) {
    FractionalSolution out = x;
    for (auto& comp : split_components(support_graph(inst, x.support()))) {
        auto vs = component_vertices(comp);
        if (comp.size() < vs.size()) continue;  // tree
        if (comp.size() > vs.size())
            throw Error(ErrorCode::InternalInvariantViolation, "support component with multiple cycles");
        auto cycle = find_cycle(comp);
        if (cycle.size() == 2)
            throw Error(ErrorCode::ParallelEdges, "2-cycle in support: " + cycle[0] + "," + cycle[1]);
        std::string cheapest;
        Rat cheapest_val;
        for (const auto& id : cycle) {
            Rat val = cost_of(costs, id) * x.value(id);
            if (cheapest.empty() || val < cheapest_val) {
                cheapest = id;
                cheapest_val = val;
            }
        }
        out.erase(cheapest);
    }
    return out;
}

RoundedForest sv_round_forest(const Instance& inst, const FractionalSolution& x, const CostMap& costs) {
    std::map<std::string, GEdge> edges;
    std::map<std::string, Rat> cur;  // strictly fractional working values
    IntegralSolution selected;
    for (const auto& [id, v] : x.values()) {
        if (v == 0) continue;
        edges.emplace(id, as_rank2(inst.edge(id)));
        if (v == 1)
            selected.insert(id);
        else
            cur[id] = v;
    }
    {
        auto st = analyze_support(inst, x);
        for (const auto& c : st.components)
            if (c.kind != ComponentKind::Tree)
                throw Error(ErrorCode::ParseError, "sv_round_forest needs an acyclic support");
    }
    if (!fractional_feasible(inst, x))
        throw Error(ErrorCode::ParseError, "sv_round_forest needs a feasible input");

    std::map<std::string, std::string> viol;

    // Total load (selected plus fractional) at a vertex.
    auto load = [&](const std::string& w) {
        Rat l = 0;
        for (const auto& [id, g] : edges) {
            long d = g.demand_at(w);
            if (d == 0) continue;
            if (selected.count(id))
                l += d;
            else if (cur.count(id))
                l += Rat(d) * cur[id];
        }
        return l;
    };

    while (!cur.empty()) {
        // Component of the smallest fractional edge id.
        std::vector<GEdge> frac;
        for (const auto& [id, v] : cur) frac.push_back(edges.at(id));
        auto comps = split_components(frac);
        const std::vector<GEdge>& comp = comps.front();

        std::map<std::string, std::vector<const GEdge*>> adj;
        for (const auto& g : comp) {
            adj[g.u].push_back(&g);
            adj[g.v].push_back(&g);
        }
        std::vector<std::string> leaves;
        for (const auto& [v, lst] : adj)
            if (lst.size() == 1) leaves.push_back(v);
        std::sort(leaves.begin(), leaves.end());
        const std::string& s = leaves[0];
        const std::string& t = leaves[1];

        // Unique tree path s -> t, DFS over id-sorted adjacency.
        Path path;
        {
            std::map<std::string, std::pair<std::string, const GEdge*>> pred;
            std::vector<std::string> stack{s};
            std::set<std::string> visited{s};
            while (!stack.empty()) {
                std::string v = stack.back();
                stack.pop_back();
                if (v == t) break;
                auto nbrs = adj[v];
                std::sort(nbrs.begin(), nbrs.end(),
                          [](const GEdge* a, const GEdge* b) { return a->id < b->id; });
                for (const GEdge* g : nbrs) {
                    std::string w = g->other(v);
                    if (visited.insert(w).second) {
                        pred[w] = {v, g};
                        stack.push_back(w);
                    }
                }
            }
            std::vector<std::string> rv{t};
            std::vector<std::string> re;
            std::string v = t;
            while (v != s) {
                auto [p, g] = pred.at(v);
                re.push_back(g->id);
                rv.push_back(p);
                v = p;
            }
            path.vertices.assign(rv.rbegin(), rv.rend());
            path.edges.assign(re.rbegin(), re.rend());
        }

        // Augmentation direction along the path.
        std::vector<Rat> z(path.edges.size());
        z[0] = 1;
        for (size_t i = 1; i < path.edges.size(); ++i) {
            const std::string& v = path.vertices[i];
            long d_prev = edges.at(path.edges[i - 1]).demand_at(v);
            long d_next = edges.at(path.edges[i]).demand_at(v);
            z[i] = -Rat(d_prev, d_next) * z[i - 1];
            z[i].canonicalize();
        }
        Rat ydz = 0;
        for (size_t i = 0; i < z.size(); ++i) ydz += cost_of(costs, path.edges[i]) * z[i];
        if (ydz < 0)
            for (auto& zi : z) zi = -zi;

        // Largest step keeping every path edge inside [0,1].
        std::optional<Rat> eps;
        for (size_t i = 0; i < z.size(); ++i) {
            const Rat& xv = cur.at(path.edges[i]);
            Rat lim = z[i] > 0 ? Rat((Rat(1) - xv) / z[i]) : Rat(xv / (-z[i]));
            if (!eps || lim < *eps) eps = lim;
        }
        for (size_t i = 0; i < z.size(); ++i) cur[path.edges[i]] += *eps * z[i];

        // Resolve edges that hit a bound; designate on overload.
        for (const auto& id : path.edges) {
            Rat v = cur.at(id);
            if (v == 0) {
                cur.erase(id);
            } else if (v == 1) {
                cur.erase(id);
                selected.insert(id);
                const GEdge& g = edges.at(id);
                for (const std::string& w : {g.u, g.v}) {
                    if (is_phantom(w)) continue;
                    if (load(w) > inst.capacity(w) && !viol.count(w)) viol[w] = id;
                }
            }
        }
    }

    RoundedForest rf;
    rf.selected = selected;
    rf.viol = viol;
    std::set<std::string> touched;
    for (const auto& id : selected) {
        const GEdge& g = edges.at(id);
        if (!is_phantom(g.u)) touched.insert(g.u);
        if (!is_phantom(g.v)) touched.insert(g.v);
    }
    for (const auto& w : touched) {
        long l = integral_load(inst, selected, w);
        rf.residual_load[w] = l;
        long b = inst.capacity(w);
        auto it = viol.find(w);
        if (it == viol.end()) {
            if (l > b)
                throw Error(ErrorCode::InternalInvariantViolation, "undesignated overload at " + w);
        } else {
            if (l - inst.edge(it->second).demand_at(w) > b)
                throw Error(ErrorCode::InternalInvariantViolation, "two removals needed at " + w);
        }
    }
    // Cost never decreased: the direction was chosen by the sign of y.z.
    if (cost_dot(costs, rf.selected) < cost_dot(costs, x))
        throw Error(ErrorCode::InternalInvariantViolation, "rounded cost below fractional cost");
    return rf;
}

namespace {

// Union-find with parity: rel[x] is the class of x relative to its root.
struct ParityUF {
    std::map<std::string, std::string> parent;
    std::map<std::string, int> rel;

    std::pair<std::string, int> find(const std::string& x) {
        if (!parent.count(x)) {
            parent[x] = x;
            rel[x] = 0;
        }
        if (parent[x] == x) return {x, 0};
        auto [root, r] = find(parent[x]);
        parent[x] = root;
        rel[x] = (rel[x] + r) % 2;
        return {root, rel[x]};
    }

    // Require class(a) xor class(b) == diff. False on conflict.
    bool relate(const std::string& a, const std::string& b, int diff) {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb) return (pa ^ pb) == diff;
        parent[rb] = ra;
        rel[rb] = (pa ^ pb ^ diff);
        return true;
    }
};

}  // namespace

Bipartition partition_feasible(const Instance& inst, const RoundedForest& rounded, const CostMap& costs) {
    ParityUF uf;
    for (const auto& [w, viol_edge] : rounded.viol) {
        if (integral_load(inst, rounded.selected, w) <= inst.capacity(w)) continue;
        // The designated edge goes opposite every other selected edge at w.
        for (const auto& id : inst.incident_edges(w)) {
            if (!rounded.selected.count(id) || id == viol_edge) continue;
            if (!uf.relate(viol_edge, id, 1))
                throw Error(ErrorCode::ParityConflict, "at vertex " + w);
        }
    }
    Bipartition bp;
    for (const auto& id : rounded.selected) {
        auto [root, p] = uf.find(id);
        (p == 0 ? bp.first : bp.second).insert(id);
    }
    if (!is_feasible(inst, bp.first) || !is_feasible(inst, bp.second))
        throw Error(ErrorCode::ParityConflict, "partition side infeasible");
    bp.best = cost_dot(costs, bp.first) >= cost_dot(costs, bp.second) ? bp.first : bp.second;
    return bp;
}

IntegralSolution point_oracle3(const Instance& inst, const FractionalSolution& x_bar, const CostMap& y) {
    if (x_bar.support().empty()) return {};
    FractionalSolution trimmed = trim_cycles(inst, x_bar, y);
    if (trimmed.support().empty()) return {};
    RoundedForest rf = sv_round_forest(inst, trimmed, y);
    return partition_feasible(inst, rf, y).best;
}

}  // namespace packlab
