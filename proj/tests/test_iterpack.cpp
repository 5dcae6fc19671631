#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "packlab/iterpack.hpp"
#include "packlab/oracle.hpp"
#include "packlab/ratlp.hpp"

using namespace packlab;
using packlab::testing::matching_triangle;
using packlab::testing::triangle;

namespace {

// Full-summation check: value(e) == alpha * x_e for every edge of x, and
// nothing outside supp(x) appears.
void check_exact_decomposition(const Instance& inst, const ConvexDecomposition& d,
                               const FractionalSolution& x, const Rat& alpha) {
    CHECK(d.total_mass() == 1);
    FractionalSolution val = d.value_vector();
    for (const auto& e : inst.edges()) {
        Rat expect = alpha * x.value(e.id);
        expect.canonicalize();
        CHECK(val.value(e.id) == expect);
    }
    for (const auto& t : d.terms()) {
        CHECK(t.lambda > 0);
        CHECK(is_feasible(inst, t.solution));
    }
}

}  // namespace

TEST_CASE("pack_edge splits the empty solution") {
    Instance t2 = triangle(2);
    ConvexDecomposition d = ConvexDecomposition::trivial();
    ConvexDecomposition out = pack_edge(t2, d, "a", Rat(1, 3));
    REQUIRE(out.size() == 2);
    CHECK(out.terms()[0].lambda == Rat(1, 3));
    CHECK(out.terms()[0].solution == IntegralSolution{"a"});
    CHECK(out.terms()[1].lambda == Rat(2, 3));
    CHECK(out.terms()[1].solution.empty());
}

TEST_CASE("pack_edge with target zero is a no-op") {
    Instance t2 = triangle(2);
    ConvexDecomposition d({{Rat(1, 2), {"b"}}, {Rat(1, 2), {}}});
    ConvexDecomposition out = pack_edge(t2, d, "a", Rat(0));
    CHECK(out.size() == d.size());
    CHECK(out.value("a") == 0);
}

TEST_CASE("pack_edge carves mass from accommodating terms only") {
    Instance t2 = triangle(2);
    // a conflicts with b at vertex 2 (load 4 > 3).
    ConvexDecomposition d({{Rat(1, 4), {"b"}}, {Rat(3, 4), {}}});
    ConvexDecomposition out = pack_edge(t2, d, "a", Rat(3, 16));
    REQUIRE(out.size() == 3);
    CHECK(out.terms()[0].lambda == Rat(1, 4));
    CHECK(out.terms()[0].solution == IntegralSolution{"b"});
    CHECK(out.terms()[1].lambda == Rat(3, 16));
    CHECK(out.terms()[1].solution == IntegralSolution{"a"});
    CHECK(out.terms()[2].lambda == Rat(9, 16));
    CHECK(out.terms()[2].solution.empty());
    CHECK(out.value("a") == Rat(3, 16));
    CHECK(out.value("b") == Rat(1, 4));
}

TEST_CASE("pack_edge raises InsufficientRoom when blocked") {
    Instance t2 = triangle(2);
    ConvexDecomposition d({{Rat(1), {"b"}}});
    try {
        pack_edge(t2, d, "a", Rat(1, 2));
        FAIL("expected InsufficientRoom");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::InsufficientRoom);
    }
}

TEST_CASE("monotone_removal_order") {
    Instance t2 = triangle(2);
    CHECK(monotone_removal_order(t2) == std::vector<std::string>{"a", "b", "c"});

    // Uniform demands sort ascending by demand, ties by id.
    Instance uni({{"u", 9}, {"v", 9}, {"w", 9}},
                 {{"x", {{"u", 3}, {"v", 3}}, Rat(1)},
                  {"y", {{"v", 1}, {"w", 1}}, Rat(1)},
                  {"z", {{"u", 2}, {"w", 2}}, Rat(1)}});
    CHECK(monotone_removal_order(uni) == std::vector<std::string>{"y", "z", "x"});

    // Both pairwise orders violated at one shared vertex pair.
    Instance bad({{"u", 9}, {"v", 9}},
                 {{"e1", {{"u", 1}, {"v", 5}}, Rat(1)}, {"e2", {{"u", 2}, {"v", 3}}, Rat(1)}});
    try {
        monotone_removal_order(bad);
        FAIL("expected NotMonotoneOrderable");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::NotMonotoneOrderable);
    }
}

TEST_CASE("iterative_pack base case and matching triangle") {
    Instance mt = matching_triangle();
    ConvexDecomposition base = iterative_pack(mt, FractionalSolution{}, Rat(2, 3), {"a", "b", "c"});
    REQUIRE(base.size() == 1);
    CHECK(base.terms()[0].lambda == 1);
    CHECK(base.terms()[0].solution.empty());

    FractionalSolution half;
    for (auto id : {"a", "b", "c"}) half.set(id, Rat(1, 2));
    ConvexDecomposition d = iterative_pack(mt, half, Rat(2, 3), {"a", "b", "c"});
    check_exact_decomposition(mt, d, half, Rat(2, 3));
    CHECK(d.value("a") == Rat(1, 3));
    // Pairwise conflicts force singleton solutions.
    for (const auto& t : d.terms()) CHECK(t.solution.size() <= 1);
}

TEST_CASE("iterative_pack on T_2 at alpha = 1/4") {
    Instance t2 = triangle(2);
    FractionalSolution x;
    for (auto id : {"a", "b", "c"}) x.set(id, Rat(3, 4));
    ConvexDecomposition d = iterative_pack(t2, x, Rat(1, 4), monotone_removal_order(t2));
    check_exact_decomposition(t2, d, x, Rat(1, 4));
    CHECK(d.value("a") == Rat(3, 16));
    CHECK(d.size() <= 4);
}

TEST_CASE("khdm_2k on T_2") {
    Instance t2 = triangle(2);
    PackOutcome out = khdm_2k(t2);
    CHECK(out.alpha == Rat(1, 4));
    CHECK(out.lp_objective == Rat(9, 4));
    check_exact_decomposition(t2, out.decomposition, out.x_star, Rat(1, 4));
    CHECK(solution_cost(t2, out.best) * Rat(2 * t2.k()) >= out.lp_objective);
    CHECK(solution_cost(t2, out.best) >= Rat(9, 16));
    CHECK(!out.best.empty());
}

TEST_CASE("khdm_2k on the Fano family") {
    Instance f3 = gen_projective_plane(2, 3);
    CHECK(f3.k() == 3);
    PackOutcome out = khdm_2k(f3);
    CHECK(out.alpha == Rat(1, 6));
    CHECK(out.lp_objective == Rat(35, 9));
    check_exact_decomposition(f3, out.decomposition, out.x_star, Rat(1, 6));
    CHECK(solution_cost(f3, out.best) >= out.lp_objective / 6);
    CHECK(!out.best.empty());
}

TEST_CASE("khdm_2k single edge") {
    Instance single({{"u", 2}, {"v", 2}}, {{"e", {{"u", 1}, {"v", 1}}, Rat(3)}});
    PackOutcome out = khdm_2k(single);
    CHECK(out.best == IntegralSolution{"e"});
    CHECK(out.decomposition.value("e") == out.alpha * out.x_star.value("e"));
    CHECK(out.decomposition.size() <= 2);
}

TEST_CASE("bmatching_pack") {
    Instance mt = matching_triangle();
    PackOutcome out = bmatching_pack(mt);
    CHECK(out.alpha == Rat(1, 3));
    CHECK(out.lp_objective == Rat(3, 2));
    check_exact_decomposition(mt, out.decomposition, out.x_star, Rat(1, 3));
    CHECK(out.decomposition.value("a") == Rat(1, 6));
    CHECK(solution_cost(mt, out.best) >= Rat(1, 2));

    // Unit-demand star, center capacity 2, three leaves.
    Instance star({{"c", 2}, {"u", 1}, {"v", 1}, {"w", 1}},
                  {{"e1", {{"c", 1}, {"u", 1}}, Rat(1)},
                   {"e2", {{"c", 1}, {"v", 1}}, Rat(1)},
                   {"e3", {{"c", 1}, {"w", 1}}, Rat(1)}});
    PackOutcome sout = bmatching_pack(star);
    CHECK(sout.lp_objective == 2);
    check_exact_decomposition(star, sout.decomposition, sout.x_star, Rat(1, 3));
    CHECK(solution_cost(star, sout.best) >= Rat(2, 3));

    Instance empty({{"v", 1}}, {});
    PackOutcome eout = bmatching_pack(empty);
    CHECK(eout.best.empty());
    CHECK(eout.decomposition.size() == 1);

    try {
        bmatching_pack(triangle(2));
        FAIL("expected NonUnitDemand");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::NonUnitDemand);
    }
}

TEST_CASE("matching_pack alpha selection") {
    Instance mt = matching_triangle();
    FractionalSolution half;
    for (auto id : {"a", "b", "c"}) half.set(id, Rat(1, 2));
    PackOutcome out = matching_pack(mt, half);
    CHECK(out.alpha == Rat(2, 3));
    CHECK(out.decomposition.value("a") == Rat(1, 3));

    // Path of 2 edges with x = (2/5, 3/5): not half-integral, alpha 1/2.
    Instance path({{"1", 1}, {"2", 1}, {"3", 1}},
                  {{"a", {{"1", 1}, {"2", 1}}, Rat(1)}, {"b", {{"2", 1}, {"3", 1}}, Rat(1)}});
    FractionalSolution x;
    x.set("a", Rat(2, 5));
    x.set("b", Rat(3, 5));
    PackOutcome pout = matching_pack(path, x);
    CHECK(pout.alpha == Rat(1, 2));
    CHECK(pout.decomposition.value("a") == Rat(1, 5));
    CHECK(pout.decomposition.value("b") == Rat(3, 10));
    check_exact_decomposition(path, pout.decomposition, x, Rat(1, 2));

    // Integral x is half-integral; best recovers the matching.
    FractionalSolution integral;
    integral.set("a", 1);
    PackOutcome iout = matching_pack(path, integral);
    CHECK(iout.alpha == Rat(2, 3));
    CHECK(iout.best == IntegralSolution{"a"});

    try {
        matching_pack(triangle(2), half);
        FAIL("expected NotMatchingInstance");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::NotMatchingInstance);
    }
}

TEST_CASE("blocking_audit") {
    Instance t2 = triangle(2);
    {
        ConvexDecomposition d = ConvexDecomposition::trivial();
        BlockingAudit a = blocking_audit(t2, d, "a", Rat(3, 4), Rat(1), 2);
        for (const auto& ep : a.endpoints) CHECK(ep.beta == 0);
        CHECK(a.condition_holds);
    }
    {
        // Audit every insertion of a khdm run.
        std::vector<BlockingAudit> audits;
        khdm_2k(t2, [&](const BlockingAudit& a) { audits.push_back(a); });
        REQUIRE(audits.size() == 3);
        for (const auto& a : audits) {
            CHECK(a.condition_holds);
            for (const auto& ep : a.endpoints) CHECK(ep.beta <= ep.bound);
        }
    }
    {
        // Negative control: alpha = 1 on T_2 must fail both ways.
        FractionalSolution x;
        for (auto id : {"a", "b", "c"}) x.set(id, Rat(3, 4));
        bool lemma1_failed = false;
        try {
            iterative_pack(t2, x, Rat(1), monotone_removal_order(t2),
                           [&](const BlockingAudit& a) {
                               if (!a.condition_holds) lemma1_failed = true;
                           });
            FAIL("expected InsufficientRoom");
        } catch (const Error& err) {
            CHECK(err.code() == ErrorCode::InsufficientRoom);
        }
        CHECK(lemma1_failed);
    }
}

TEST_CASE("sparsity bound |D| <= inserted + 1 on random instances") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        RandomSpec spec;
        spec.k = 2 + seed % 3;
        spec.n_vertices = 6;
        spec.m_edges = 9;
        spec.uniform_demand = true;
        spec.seed = seed;
        Instance inst = gen_random(spec);
        PackOutcome out = khdm_2k(inst);
        CHECK(out.decomposition.size() <= inst.edges().size() + 1);
        check_exact_decomposition(inst, out.decomposition, out.x_star, out.alpha);
        CHECK(solution_cost(inst, out.best) * Rat(2 * inst.k()) >= out.lp_objective);
    }
}
