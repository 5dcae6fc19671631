#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "packlab/core.hpp"
#include "packlab/rational.hpp"
#include "packlab/twocs.hpp"

namespace packlab {

struct CoverageDecomposition {
    ConvexDecomposition decomposition;
    std::map<std::string, Rat> target;  // t(e) = x_bar_e / r
    bool exact = false;                 // false: dominates (value >= target)
    size_t iterations = 0;
};

// Restricted master snapshot, one per pricing round.
struct MasterState {
    std::vector<IntegralSolution> columns;
    Rat t;
    CostMap y;  // coverage duals
    Rat sigma;  // convexity dual
    size_t iteration = 0;
};

// Feasible column within supp(x_bar) with y.z >= (y.x_bar)/r.
using PointOracle = std::function<IntegralSolution(const CostMap& y)>;

size_t default_iteration_budget(size_t support_size);

CoverageDecomposition carr_vempala(const Instance& inst, const FractionalSolution& x_bar, long r,
                                   const PointOracle& oracle, size_t budget = 0,
                                   std::vector<MasterState>* trace = nullptr);

CoverageDecomposition exact_repair(const Instance& inst, const CoverageDecomposition& cover);

struct Certificate {
    Rat lp_objective;
    Rat best_cost;
    Rat ratio;  // best_cost / lp_objective, 0 when the LP objective is 0
    Rat alpha;
    size_t solutions = 0;
    size_t iterations = 0;
};

struct TwoCsResult {
    ConvexDecomposition decomposition;  // exact decomposition of x_hat / 3
    IntegralSolution best;
    Certificate certificate;
    FractionalSolution x_hat;
};

TwoCsResult two_cs_pip_3approx(const Instance& inst, size_t budget = 0);

}  // namespace packlab
