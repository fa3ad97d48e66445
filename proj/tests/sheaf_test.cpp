#include "prismal/fixtures.hpp"
#include "prismal/mesh.hpp"
#include "prismal/sheaf.hpp"
#include "prismal/verify.hpp"

#include <doctest.h>

using namespace prismal;

TEST_CASE("complex_validation") {
    CHECK_THROWS_AS(SimplicialComplex({0, 1}, {{0, 2}}), ValidationError);
    CHECK_THROWS_AS(SimplicialComplex({0, 1, 2}, {{0, 1, 2}, {0, 1}}), ValidationError);
    CHECK_THROWS_AS(SimplicialComplex({0, 0}, {{0}}), ValidationError);
    SimplicialComplex k({0, 1, 2}, {{0, 1}, {1, 2}});
    CHECK(k.simplices(1).size() == 2);
    CHECK(k.contains({1}));
    CHECK_FALSE(k.contains({0, 2}));
}

TEST_CASE("morphism_validation") {
    SimplicialComplex base({0, 1}, {{0, 1}});
    SimplicialComplex src({10, 11}, {{10, 11}});
    CHECK_THROWS_AS(SimplicialMorphism(src, base, {{10, 0}}), ValidationError);
    CHECK_THROWS_AS(SimplicialMorphism(src, base, {{10, 0}, {11, 5}}), ValidationError);
}

TEST_CASE("boundary_squared_is_zero") {
    for (int p = 1; p <= 5; ++p) {
        VertexList v;
        for (int i = 0; i <= p; ++i) v.push_back(i);
        CHECK(boundary_of_chain(boundary_chain(Simplex(v))).empty());
    }
    Prism pr({Simplex({0, 1}), Simplex({2, 3, 4}), Simplex({5, 6})});
    CHECK(boundary_of_chain(prism_boundary(pr)).empty());
}

TEST_CASE("incidence_numbers") {
    Simplex s({0, 1, 2});
    CHECK(incidence_number(s, Simplex({1, 2})) == 1);
    CHECK(incidence_number(s, Simplex({0, 2})) == -1);
    CHECK(incidence_number(s, Simplex({0, 1})) == 1);
}

TEST_CASE("figure1_stalks") {
    auto f = figure1_morphism();
    PrismalSheaf P = build_Pf(f);
    // Over the edge (0,1): three triangles and the four edges joining the fibers.
    CHECK(P.stalk({0, 1}).size() == 7);
    CHECK(P.stalk({0}).size() == 3);
    CHECK(P.stalk({1}).size() == 5);
    SheafCell pi = pi_of(f, Simplex({10, 20, 21}));
    CHECK(pi.factors.size() == 3);
    CHECK(relative_dim(pi) == 1);
    // (10,20,21) loses its fiber dimension over y_0.
    CHECK_FALSE(is_equidimensional(pi, {0}));
    CHECK(is_equidimensional(pi, {1}));
}

TEST_CASE("characterizations_hold_on_fixtures") {
    auto reports = suite_structure(builtin_fixtures(), Universe{});
    for (const auto& r : reports) {
        CAPTURE(r.identity);
        CAPTURE(r.case_desc);
        CHECK(r.pass);
    }
}

TEST_CASE("theta_and_psi_are_inverse") {
    auto f = figure5_morphism();
    Simplex sigma({10, 11, 20, 21, 30, 31});
    std::map<VertexId, Rational> x;
    int i = 1;
    for (VertexId v : sigma.vertices) {
        Rational w(i++, 21);
        w.canonicalize();
        x[v] = w;
    }
    CHECK(psi_sigma(f, sigma, theta_sigma(f, sigma, x)) == x);
}
