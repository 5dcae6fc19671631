#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "packlab/core.hpp"
#include "packlab/rational.hpp"

namespace packlab {

// Diagnostic record for one insertion, mirroring the blocking analysis.
struct BlockingBin {
    Rat multiplier;
    long height = 0;
};

struct EndpointAudit {
    std::string vertex;
    Rat beta;        // mass of solutions that cannot take S at this vertex
    Rat bound;       // alpha (b_u - d^S_u x*_S) / max{b_u - d^S_u + 1, delta_bar}
    std::vector<BlockingBin> bins;
};

struct BlockingAudit {
    std::string edge;
    std::vector<EndpointAudit> endpoints;
    Rat room;        // 1 - sum_u beta_u
    Rat required;    // alpha * x*_S
    bool condition_holds = false;
};

// Called just before each insertion when auditing is enabled.
using AuditHook = std::function<void(const BlockingAudit&)>;

ConvexDecomposition pack_edge(const Instance& inst, const ConvexDecomposition& decomp,
                              const std::string& edge_id, const Rat& target);

// Order S_1..S_m with d^{S_i}_u <= d^{S_j}_u for i <= j at every shared vertex u.
std::vector<std::string> monotone_removal_order(const Instance& inst);

ConvexDecomposition iterative_pack(const Instance& inst, const FractionalSolution& x_star,
                                   const Rat& alpha, const std::vector<std::string>& removal_order,
                                   const AuditHook& audit = nullptr);

struct PackOutcome {
    ConvexDecomposition decomposition;
    IntegralSolution best;
    Rat alpha;
    FractionalSolution x_star;
    Rat lp_objective;
};

PackOutcome khdm_2k(const Instance& inst, const AuditHook& audit = nullptr);
PackOutcome bmatching_pack(const Instance& inst, const AuditHook& audit = nullptr);
PackOutcome matching_pack(const Instance& inst, const FractionalSolution& x_star,
                          const AuditHook& audit = nullptr);

BlockingAudit blocking_audit(const Instance& inst, const ConvexDecomposition& decomp,
                             const std::string& edge_id, const Rat& x_star_S, const Rat& alpha,
                             long delta_bar);

// Max-cost solution of the decomposition; ties broken by first occurrence.
IntegralSolution best_solution(const Instance& inst, const ConvexDecomposition& decomp);

}  // namespace packlab
