#pragma once

#include <map>
#include <string>
#include <vector>

#include "packlab/core.hpp"
#include "packlab/rational.hpp"

namespace packlab {

using CostMap = std::map<std::string, Rat>;

inline Rat cost_of(const CostMap& costs, const std::string& edge_id) {
    auto it = costs.find(edge_id);
    return it == costs.end() ? Rat(0) : it->second;
}

Rat cost_dot(const CostMap& costs, const FractionalSolution& x);
Rat cost_dot(const CostMap& costs, const IntegralSolution& sol);

enum class ComponentKind { Tree, Unicyclic, MultiCycle };

struct SupportComponent {
    std::vector<std::string> vertices;  // sorted; single-endpoint edges add a "~<edge>" leaf
    std::vector<std::string> edges;     // sorted
    ComponentKind kind = ComponentKind::Tree;
    std::vector<std::string> cycle_edges;  // nonempty iff unicyclic
};

struct SupportStructure {
    std::vector<SupportComponent> components;
    bool multi_cycle = false;  // legal for arbitrary x, impossible for extreme points
};

struct Path {
    std::vector<std::string> vertices;  // v_0 .. v_k
    std::vector<std::string> edges;     // e_1 .. e_k
};

struct RoundedForest {
    IntegralSolution selected;                 // M
    std::map<std::string, std::string> viol;   // vertex -> designated edge
    std::map<std::string, long> residual_load; // load of M per touched vertex
};

struct Bipartition {
    IntegralSolution first;
    IntegralSolution second;
    IntegralSolution best;
};

// Components of the strictly fractional support (0 < x < 1).
SupportStructure analyze_support(const Instance& inst, const FractionalSolution& x);

// z along the path: z_1 = 1, z_{i+1} = -(d^{e_i}_{v_i}/d^{e_{i+1}}_{v_i}) z_i.
std::vector<Rat> augmentation_vector(const Instance& inst, const Path& path);

// Zeroes the cheapest (costs_e * x_e) edge of every cycle in the support.
FractionalSolution trim_cycles(const Instance& inst, const FractionalSolution& x, const CostMap& costs);

RoundedForest sv_round_forest(const Instance& inst, const FractionalSolution& x, const CostMap& costs);

Bipartition partition_feasible(const Instance& inst, const RoundedForest& rounded, const CostMap& costs);

// Feasible z with y.z >= (y.x)/3, via trimming + rounding + partition.
IntegralSolution point_oracle3(const Instance& inst, const FractionalSolution& x_bar, const CostMap& y);

}  // namespace packlab
