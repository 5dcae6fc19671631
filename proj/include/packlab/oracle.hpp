#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "packlab/core.hpp"
#include "packlab/rational.hpp"

namespace packlab {

struct GapReport {
    Rat lp_optimum;
    Rat ip_optimum;
    Rat gap;  // lp/ip; meaningless when infinite is set
    bool infinite = false;
    FractionalSolution extreme_point;
    IntegralSolution optimal_solution;
};

// Maximum-weight feasible subset by subset enumeration; ties resolved to
// the lexicographically smallest edge set. Independent of the LP solver.
IntegralSolution brute_force_opt(const Instance& inst, size_t edge_limit = 20);

GapReport integrality_gap(const Instance& inst, size_t edge_limit = 20);

// Projective plane of order q (q = 1 gives the triangle), demands d,
// capacities 2d-1, unit weights.
Instance gen_projective_plane(long q, long d);

struct RandomSpec {
    int k = 2;
    int n_vertices = 6;
    int m_edges = 8;
    long max_demand = 5;
    long max_capacity = 20;
    long max_weight = 10;
    bool uniform_demand = false;
    std::uint64_t seed = 0;
};

Instance gen_random(const RandomSpec& spec);

Instance gen_star_knapsack(long capacity, const std::vector<long>& demands, const std::vector<Rat>& weights);

}  // namespace packlab
