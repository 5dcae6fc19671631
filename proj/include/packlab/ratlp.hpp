#pragma once

#include <optional>
#include <string>
#include <vector>

#include "packlab/core.hpp"
#include "packlab/rational.hpp"

namespace packlab {

// max c.x  s.t.  A x <= b,  0 <= x <= u  (u may be absent per variable).
struct LinearProgram {
    std::vector<Rat> objective;
    std::vector<std::vector<Rat>> rows;
    std::vector<Rat> rhs;
    std::vector<std::optional<Rat>> upper;
    std::vector<std::string> var_names;  // optional labels (edge ids for natural relaxations)
    std::vector<std::string> row_names;  // vertex ids for natural relaxations

    size_t num_vars() const { return objective.size(); }
    size_t num_rows() const { return rows.size(); }
};

// Basic optimal solution with exact dual certificate.
struct LpResult {
    std::vector<Rat> x;
    Rat objective;
    std::vector<Rat> duals;        // one per row, >= 0
    std::vector<Rat> bound_duals;  // one per variable (upper-bound dual), >= 0
    std::vector<bool> tight_rows;  // A_i x == b_i
    std::vector<bool> at_lower;    // x_j == 0
    std::vector<bool> at_upper;    // x_j == u_j

    Rat dual_objective(const LinearProgram& lp) const;
};

LpResult solve_lp(const LinearProgram& lp);

// Rank over Q of the active constraint rows (tight rows plus tight bounds).
size_t active_rank(const LinearProgram& lp, const LpResult& res);

// One row per vertex, coefficients d^S_v on incident edges, rhs b_v; bounds [0,1].
// Variables are edges in ascending id order, rows are vertices in ascending id order.
LinearProgram build_natural_relaxation(const Instance& inst,
                                       const std::optional<std::map<std::string, Rat>>& costs = std::nullopt);

// Extreme point of the natural relaxation as a FractionalSolution.
FractionalSolution lp_solution_to_fractional(const LinearProgram& lp, const LpResult& res);

}  // namespace packlab
