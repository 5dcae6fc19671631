#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "packlab/error.hpp"
#include "packlab/rational.hpp"

namespace packlab {

struct Endpoint {
    std::string vertex;
    long demand = 1;  // d^S_v, positive
};

struct Edge {
    std::string id;
    std::vector<Endpoint> endpoints;
    Rat weight;  // c_S, nonnegative

    bool uniform_demand() const;
    // Demand of this edge at vertex v; 0 if v is not an endpoint.
    long demand_at(const std::string& v) const;
    bool incident(const std::string& v) const;
};

struct Vertex {
    std::string id;
    long capacity = 1;  // b_v, positive
};

// Validated k-CS-PIP instance. Immutable after construction.
class Instance {
public:
    Instance() = default;
    Instance(std::vector<Vertex> vertices, std::vector<Edge> edges);

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    int k() const { return k_; }

    const Vertex& vertex(const std::string& id) const;
    const Edge& edge(const std::string& id) const;
    bool has_edge(const std::string& id) const { return edge_index_.count(id) > 0; }
    bool has_vertex(const std::string& id) const { return vertex_index_.count(id) > 0; }
    long capacity(const std::string& v) const { return vertex(v).capacity; }

    // Edge ids incident to v, in instance order.
    const std::vector<std::string>& incident_edges(const std::string& v) const;

    bool all_unit_demand() const;
    bool all_uniform_demand() const;
    bool has_parallel_edges() const;

private:
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::map<std::string, size_t> vertex_index_;
    std::map<std::string, size_t> edge_index_;
    std::map<std::string, std::vector<std::string>> incidence_;
    int k_ = 1;
};

// Exact-rational vector over edge ids; absent ids read as 0.
class FractionalSolution {
public:
    FractionalSolution() = default;
    explicit FractionalSolution(std::map<std::string, Rat> values) : values_(std::move(values)) {}

    Rat value(const std::string& edge_id) const;
    void set(const std::string& edge_id, const Rat& v);
    void erase(const std::string& edge_id) { values_.erase(edge_id); }
    const std::map<std::string, Rat>& values() const { return values_; }
    // Edge ids with strictly positive value.
    std::vector<std::string> support() const;
    bool in_unit_box() const;

private:
    std::map<std::string, Rat> values_;
};

using IntegralSolution = std::set<std::string>;

struct DecompTerm {
    Rat lambda;  // positive
    IntegralSolution solution;
};

class ConvexDecomposition {
public:
    ConvexDecomposition() = default;
    explicit ConvexDecomposition(std::vector<DecompTerm> terms) : terms_(std::move(terms)) {}

    static ConvexDecomposition trivial() { return ConvexDecomposition({{Rat(1), {}}}); }

    const std::vector<DecompTerm>& terms() const { return terms_; }
    std::vector<DecompTerm>& terms() { return terms_; }
    size_t size() const { return terms_.size(); }

    Rat total_mass() const;
    // Sum of multipliers over terms containing edge_id.
    Rat value(const std::string& edge_id) const;
    FractionalSolution value_vector() const;
    // Merge terms with identical solutions, drop zero-mass terms.
    void normalize();

private:
    std::vector<DecompTerm> terms_;
};

bool is_feasible(const Instance& inst, const IntegralSolution& sol);
Rat solution_cost(const Instance& inst, const IntegralSolution& sol);
bool fractional_feasible(const Instance& inst, const FractionalSolution& x);

// Load of an integral solution at vertex v.
long integral_load(const Instance& inst, const IntegralSolution& sol, const std::string& v);
Rat fractional_load(const Instance& inst, const FractionalSolution& x, const std::string& v);

// JSON instance format: {"vertices":[{"id","capacity"}],"edges":[{"id","endpoints":[{"vertex","demand"}],"weight"}]}
Instance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const Instance& inst);
Instance parse_instance(const std::string& text);
std::string emit_instance(const Instance& inst);

// Decomposition JSON: {"alpha":"p/q","terms":[{"lambda":"p/q","edges":[ids]}]}
nlohmann::json decomposition_to_json(const ConvexDecomposition& d, const Rat& alpha);
std::pair<ConvexDecomposition, Rat> decomposition_from_json(const nlohmann::json& j);

}  // namespace packlab
