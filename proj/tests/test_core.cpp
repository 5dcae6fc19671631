#include <doctest.h>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "packlab/core.hpp"
#include "packlab/oracle.hpp"

using namespace packlab;
using packlab::testing::star_knapsack;
using packlab::testing::triangle;

TEST_CASE("rational parsing") {
    CHECK(parse_rat("3/4") == Rat(3, 4));
    CHECK(parse_rat("-2") == Rat(-2));
    CHECK(rat_str(Rat(9, 4)) == "9/4");
    CHECK(rat_str(Rat(2)) == "2");
    CHECK_THROWS(parse_rat("1/0"));
    CHECK_THROWS(parse_rat("abc"));
}

TEST_CASE("instance validation") {
    CHECK(triangle(2).k() == 2);
    // No-clipping violation is a distinct load-time error.
    CHECK_THROWS_AS(Instance({{"v", 1}}, {{"e", {{"v", 2}}, Rat(1)}}), Error);
    try {
        Instance({{"v", 1}}, {{"e", {{"v", 2}}, Rat(1)}});
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::ClippingViolation);
    }
    CHECK_THROWS_AS(Instance({{"v", 1}, {"v", 2}}, {}), Error);
    CHECK_THROWS_AS(Instance({{"v", 1}}, {{"e", {{"w", 1}}, Rat(1)}}), Error);
    // Zero-weight edges are permitted.
    CHECK_NOTHROW(Instance({{"v", 2}}, {{"e", {{"v", 1}}, Rat(0)}}));
    // Parallel edges are accepted by the model.
    Instance par({{"u", 2}, {"v", 2}},
                 {{"e", {{"u", 1}, {"v", 1}}, Rat(1)}, {"f", {{"u", 1}, {"v", 1}}, Rat(1)}});
    CHECK(par.has_parallel_edges());
}

TEST_CASE("is_feasible") {
    Instance t2 = triangle(2);
    CHECK(is_feasible(t2, {}));
    CHECK_FALSE(is_feasible(t2, {"a", "b"}));  // load 4 > 3 at vertex 2
    CHECK(is_feasible(t2, {"a"}));
    CHECK_THROWS_AS((void)is_feasible(t2, {"zzz"}), Error);
}

TEST_CASE("solution_cost") {
    Instance t2 = triangle(2);
    CHECK(solution_cost(t2, {}) == 0);
    CHECK(solution_cost(t2, {"a", "c"}) == 2);
    CHECK(solution_cost(star_knapsack(), {"e3"}) == 4);
}

TEST_CASE("fractional_feasible") {
    Instance t2 = triangle(2);
    CHECK(fractional_feasible(t2, FractionalSolution{}));
    FractionalSolution x;
    for (auto id : {"a", "b", "c"}) x.set(id, Rat(3, 4));
    CHECK(fractional_feasible(t2, x));  // load 2*(3/4+3/4) = 3 = b
    FractionalSolution y;
    y.set("a", 1);
    y.set("b", 1);
    CHECK_FALSE(fractional_feasible(t2, y));  // load 4 > 3
    FractionalSolution over;
    over.set("a", Rat(3, 2));
    CHECK_FALSE(fractional_feasible(t2, over));
}

TEST_CASE("decomposition value vector is a convex combination of feasible points") {
    Instance t2 = triangle(2);
    ConvexDecomposition d({{Rat(1, 3), {"a"}}, {Rat(1, 3), {"b"}}, {Rat(1, 3), {"c"}}});
    CHECK(d.total_mass() == 1);
    CHECK(d.value("a") == Rat(1, 3));
    CHECK(fractional_feasible(t2, d.value_vector()));
    for (const auto& t : d.terms()) CHECK(is_feasible(t2, t.solution));
}

TEST_CASE("deleting an edge from a feasible solution preserves feasibility") {
    // Property over random instances.
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RandomSpec spec;
        spec.k = 3;
        spec.n_vertices = 6;
        spec.m_edges = 10;
        spec.seed = seed;
        Instance inst = gen_random(spec);
        IntegralSolution sol = brute_force_opt(inst);
        REQUIRE(is_feasible(inst, sol));
        for (const auto& id : sol) {
            IntegralSolution smaller = sol;
            smaller.erase(id);
            CHECK(is_feasible(inst, smaller));
        }
    }
}

TEST_CASE("instance JSON round trip is bit-exact") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RandomSpec spec;
        spec.seed = seed;
        spec.uniform_demand = seed % 2 == 0;
        Instance inst = gen_random(spec);
        Instance back = parse_instance(emit_instance(inst));
        CHECK(emit_instance(back) == emit_instance(inst));
    }
    // Rational weights survive exactly.
    Instance w({{"v", 3}}, {{"e", {{"v", 1}}, Rat(22, 7)}});
    Instance back = parse_instance(emit_instance(w));
    CHECK(back.edge("e").weight == Rat(22, 7));
    // Integer shorthand for weights is accepted.
    Instance shorthand = parse_instance(
        R"({"vertices":[{"id":"v","capacity":2}],"edges":[{"id":"e","endpoints":[{"vertex":"v","demand":1}],"weight":5}]})");
    CHECK(shorthand.edge("e").weight == 5);
}

TEST_CASE("decomposition JSON round trip") {
    ConvexDecomposition d({{Rat(1, 3), {"a"}}, {Rat(2, 3), {}}});
    nlohmann::json j = decomposition_to_json(d, Rat(1, 4));
    auto [back, alpha] = decomposition_from_json(j);
    CHECK(alpha == Rat(1, 4));
    CHECK(back.size() == 2);
    CHECK(back.value("a") == Rat(1, 3));
    CHECK(decomposition_to_json(back, alpha) == j);
}

TEST_CASE("normalize merges duplicate solutions") {
    ConvexDecomposition d({{Rat(1, 4), {"a"}}, {Rat(1, 4), {"a"}}, {Rat(1, 2), {}}});
    d.normalize();
    CHECK(d.size() == 2);
    CHECK(d.value("a") == Rat(1, 2));
    CHECK(d.total_mass() == 1);
}
