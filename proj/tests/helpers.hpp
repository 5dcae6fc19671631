#pragma once

#include "packlab/core.hpp"
#include "packlab/rational.hpp"

namespace packlab::testing {

// Triangle T_d: vertices {1,2,3} with capacity 2d-1, edges a={1,2},
// b={2,3}, c={1,3}, all demands d, unit weights.
inline Instance triangle(long d) {
    long cap = 2 * d - 1;
    return Instance({{"1", cap}, {"2", cap}, {"3", cap}},
                    {{"a", {{"1", d}, {"2", d}}, Rat(1)},
                     {"b", {{"2", d}, {"3", d}}, Rat(1)},
                     {"c", {{"1", d}, {"3", d}}, Rat(1)}});
}

inline Instance matching_triangle() {
    return Instance({{"1", 1}, {"2", 1}, {"3", 1}},
                    {{"a", {{"1", 1}, {"2", 1}}, Rat(1)},
                     {"b", {{"2", 1}, {"3", 1}}, Rat(1)},
                     {"c", {{"1", 1}, {"3", 1}}, Rat(1)}});
}

// Star knapsack: center capacity 5, three items of demand 3, weights 2,3,4.
inline Instance star_knapsack() {
    return Instance({{"c", 5}, {"u", 3}, {"v", 3}, {"w", 3}},
                    {{"e1", {{"c", 3}, {"u", 3}}, Rat(2)},
                     {"e2", {{"c", 3}, {"v", 3}}, Rat(3)},
                     {"e3", {{"c", 3}, {"w", 3}}, Rat(4)}});
}

}  // namespace packlab::testing
