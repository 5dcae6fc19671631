#include "packlab/core.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace packlab {

bool Edge::uniform_demand() const {
    for (const auto& ep : endpoints)
        if (ep.demand != endpoints.front().demand) return false;
    return true;
}

long Edge::demand_at(const std::string& v) const {
    for (const auto& ep : endpoints)
        if (ep.vertex == v) return ep.demand;
    return 0;
}

bool Edge::incident(const std::string& v) const {
    return demand_at(v) != 0;
}

Instance::Instance(std::vector<Vertex> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    for (size_t i = 0; i < vertices_.size(); ++i) {
        const auto& v = vertices_[i];
        if (v.capacity <= 0) throw Error(ErrorCode::ParseError, "capacity of " + v.id + " must be positive");
        if (!vertex_index_.emplace(v.id, i).second)
            throw Error(ErrorCode::DuplicateId, "vertex " + v.id);
    }
    for (size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        if (!edge_index_.emplace(e.id, i).second)
            throw Error(ErrorCode::DuplicateId, "edge " + e.id);
        if (e.endpoints.empty())
            throw Error(ErrorCode::ParseError, "edge " + e.id + " has no endpoints");
        if (e.weight < 0)
            throw Error(ErrorCode::ParseError, "edge " + e.id + " has negative weight");
        std::set<std::string> seen;
        for (const auto& ep : e.endpoints) {
            if (!vertex_index_.count(ep.vertex))
                throw Error(ErrorCode::UnknownVertex, "edge " + e.id + " references " + ep.vertex);
            if (!seen.insert(ep.vertex).second)
                throw Error(ErrorCode::ParseError, "edge " + e.id + " repeats endpoint " + ep.vertex);
            if (ep.demand <= 0)
                throw Error(ErrorCode::ParseError, "edge " + e.id + " has nonpositive demand at " + ep.vertex);
            if (ep.demand > vertices_[vertex_index_[ep.vertex]].capacity)
                throw Error(ErrorCode::ClippingViolation,
                            "edge " + e.id + " demands " + std::to_string(ep.demand) + " at " + ep.vertex +
                                " with capacity " + std::to_string(vertices_[vertex_index_[ep.vertex]].capacity));
            incidence_[ep.vertex].push_back(e.id);
        }
        k_ = std::max<int>(k_, static_cast<int>(e.endpoints.size()));
    }
}

const Vertex& Instance::vertex(const std::string& id) const {
    auto it = vertex_index_.find(id);
    if (it == vertex_index_.end()) throw Error(ErrorCode::UnknownVertex, id);
    return vertices_[it->second];
}

const Edge& Instance::edge(const std::string& id) const {
    auto it = edge_index_.find(id);
    if (it == edge_index_.end()) throw Error(ErrorCode::UnknownEdge, id);
    return edges_[it->second];
}

const std::vector<std::string>& Instance::incident_edges(const std::string& v) const {
    static const std::vector<std::string> kEmpty;
    if (!vertex_index_.count(v)) throw Error(ErrorCode::UnknownVertex, v);
    auto it = incidence_.find(v);
    return it == incidence_.end() ? kEmpty : it->second;
}

bool Instance::all_unit_demand() const {
    for (const auto& e : edges_)
        for (const auto& ep : e.endpoints)
            if (ep.demand != 1) return false;
    return true;
}

bool Instance::all_uniform_demand() const {
    for (const auto& e : edges_)
        if (!e.uniform_demand()) return false;
    return true;
}

bool Instance::has_parallel_edges() const {
    std::set<std::set<std::string>> shapes;
    for (const auto& e : edges_) {
        std::set<std::string> vs;
        for (const auto& ep : e.endpoints) vs.insert(ep.vertex);
        if (!shapes.insert(vs).second) return true;
    }
    return false;
}

Rat FractionalSolution::value(const std::string& edge_id) const {
    auto it = values_.find(edge_id);
    return it == values_.end() ? Rat(0) : it->second;
}

void FractionalSolution::set(const std::string& edge_id, const Rat& v) {
    if (v == 0)
        values_.erase(edge_id);
    else
        values_[edge_id] = v;
}

std::vector<std::string> FractionalSolution::support() const {
    std::vector<std::string> out;
    for (const auto& [id, v] : values_)
        if (v > 0) out.push_back(id);
    return out;
}

bool FractionalSolution::in_unit_box() const {
    for (const auto& [id, v] : values_)
        if (v < 0 || v > 1) return false;
    return true;
}

Rat ConvexDecomposition::total_mass() const {
    Rat s = 0;
    for (const auto& t : terms_) s += t.lambda;
    return s;
}

Rat ConvexDecomposition::value(const std::string& edge_id) const {
    Rat s = 0;
    for (const auto& t : terms_)
        if (t.solution.count(edge_id)) s += t.lambda;
    return s;
}

FractionalSolution ConvexDecomposition::value_vector() const {
    std::map<std::string, Rat> v;
    for (const auto& t : terms_)
        for (const auto& e : t.solution) v[e] += t.lambda;
    for (auto it = v.begin(); it != v.end();)
        it = (it->second == 0) ? v.erase(it) : std::next(it);
    return FractionalSolution(std::move(v));
}

void ConvexDecomposition::normalize() {
    std::map<IntegralSolution, Rat> merged;
    std::vector<IntegralSolution> order;
    for (const auto& t : terms_) {
        if (t.lambda == 0) continue;
        auto [it, fresh] = merged.emplace(t.solution, t.lambda);
        if (fresh)
            order.push_back(t.solution);
        else
            it->second += t.lambda;
    }
    terms_.clear();
    for (const auto& sol : order) terms_.push_back({merged[sol], sol});
}

long integral_load(const Instance& inst, const IntegralSolution& sol, const std::string& v) {
    long load = 0;
    for (const auto& id : sol) load += inst.edge(id).demand_at(v);
    return load;
}

Rat fractional_load(const Instance& inst, const FractionalSolution& x, const std::string& v) {
    Rat load = 0;
    for (const auto& id : inst.incident_edges(v)) load += Rat(inst.edge(id).demand_at(v)) * x.value(id);
    return load;
}

bool is_feasible(const Instance& inst, const IntegralSolution& sol) {
    std::map<std::string, long> load;
    for (const auto& id : sol) {
        const Edge& e = inst.edge(id);  // throws UnknownEdge
        for (const auto& ep : e.endpoints) load[ep.vertex] += ep.demand;
    }
    for (const auto& [v, l] : load)
        if (l > inst.capacity(v)) return false;
    return true;
}

Rat solution_cost(const Instance& inst, const IntegralSolution& sol) {
    Rat s = 0;
    for (const auto& id : sol) s += inst.edge(id).weight;
    return s;
}

bool fractional_feasible(const Instance& inst, const FractionalSolution& x) {
    if (!x.in_unit_box()) return false;
    for (const auto& v : inst.vertices())
        if (fractional_load(inst, x, v.id) > v.capacity) return false;
    return true;
}

namespace {

Rat rat_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (j.is_string()) return parse_rat(j.get<std::string>());
    throw Error(ErrorCode::ParseError, "expected integer or \"p/q\" string");
}

}  // namespace

Instance instance_from_json(const nlohmann::json& j) {
    try {
        std::vector<Vertex> vs;
        for (const auto& jv : j.at("vertices"))
            vs.push_back({jv.at("id").get<std::string>(), jv.at("capacity").get<long>()});
        std::vector<Edge> es;
        for (const auto& je : j.at("edges")) {
            Edge e;
            e.id = je.at("id").get<std::string>();
            for (const auto& jp : je.at("endpoints"))
                e.endpoints.push_back({jp.at("vertex").get<std::string>(), jp.at("demand").get<long>()});
            e.weight = rat_from_json(je.at("weight"));
            es.push_back(std::move(e));
        }
        return Instance(std::move(vs), std::move(es));
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::ParseError, ex.what());
    }
}

nlohmann::json instance_to_json(const Instance& inst) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    std::vector<Vertex> vs = inst.vertices();
    std::sort(vs.begin(), vs.end(), [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
    for (const auto& v : vs) j["vertices"].push_back({{"id", v.id}, {"capacity", v.capacity}});
    j["edges"] = nlohmann::json::array();
    std::vector<Edge> es = inst.edges();
    std::sort(es.begin(), es.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
    for (const auto& e : es) {
        nlohmann::json je;
        je["id"] = e.id;
        je["endpoints"] = nlohmann::json::array();
        auto eps = e.endpoints;
        std::sort(eps.begin(), eps.end(), [](const Endpoint& a, const Endpoint& b) { return a.vertex < b.vertex; });
        for (const auto& ep : eps) je["endpoints"].push_back({{"vertex", ep.vertex}, {"demand", ep.demand}});
        je["weight"] = rat_str(e.weight);
        j["edges"].push_back(je);
    }
    return j;
}

Instance parse_instance(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::ParseError, "invalid JSON");
    return instance_from_json(j);
}

std::string emit_instance(const Instance& inst) {
    return instance_to_json(inst).dump();
}

nlohmann::json decomposition_to_json(const ConvexDecomposition& d, const Rat& alpha) {
    nlohmann::json j;
    j["alpha"] = rat_str(alpha);
    j["terms"] = nlohmann::json::array();
    for (const auto& t : d.terms()) {
        nlohmann::json jt;
        jt["lambda"] = rat_str(t.lambda);
        jt["edges"] = nlohmann::json::array();
        for (const auto& id : t.solution) jt["edges"].push_back(id);  // set: already sorted
        j["terms"].push_back(jt);
    }
    return j;
}

std::pair<ConvexDecomposition, Rat> decomposition_from_json(const nlohmann::json& j) {
    try {
        Rat alpha = rat_from_json(j.at("alpha"));
        std::vector<DecompTerm> terms;
        for (const auto& jt : j.at("terms")) {
            DecompTerm t;
            t.lambda = rat_from_json(jt.at("lambda"));
            for (const auto& id : jt.at("edges")) t.solution.insert(id.get<std::string>());
            terms.push_back(std::move(t));
        }
        return {ConvexDecomposition(std::move(terms)), alpha};
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::ParseError, ex.what());
    }
}

}  // namespace packlab
