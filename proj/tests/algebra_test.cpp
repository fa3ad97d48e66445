#include "prismal/forms.hpp"
#include "prismal/verify.hpp"

#include <doctest.h>

#include <random>

using namespace prismal;

namespace {

Poly L(int v) { return Poly::var(Var::lambda(v)); }

std::vector<Var> lambdas(int p) {
    std::vector<Var> out;
    for (int i = 0; i <= p; ++i) out.push_back(Var::lambda(i));
    return out;
}

}  // namespace

TEST_CASE("var_names_round_trip") {
    for (Var v : {Var::lambda(3), Var::t(0), Var::mu(1, 7), Var::u(2)}) CHECK(Var::parse(v.name()) == v);
    CHECK_THROWS_AS(Var::parse("q:1"), std::invalid_argument);
    CHECK(Var::mu(1, 7).first() == 1);
    CHECK(Var::mu(1, 7).vertex() == 7);
}

TEST_CASE("poly_arithmetic") {
    Poly p = L(0) + L(1);
    CHECK(pow(p, 2) == L(0) * L(0) + Rational(2) * L(0) * L(1) + L(1) * L(1));
    CHECK((p - p).is_zero());
    CHECK(p.derivative(Var::lambda(0)) == Poly(1));
    CHECK(pow(p, 3).total_degree() == 3);
    CHECK(p.evaluate({{Var::lambda(0), Rational(1, 3)}, {Var::lambda(1), Rational(1, 6)}}) == Rational(1, 2));
    CHECK(parse_rational("-6/4") == Rational(-3, 2));
    CHECK(binomial(5, 2) == 10);
}

TEST_CASE("wedge_is_graded_commutative") {
    Form a = Form::dvar(Var::lambda(0)), b = Form::dvar(Var::lambda(1));
    CHECK(wedge(a, b) == -wedge(b, a));
    CHECK(wedge(a, a).is_zero());
    Form c = L(2) * Form::dvar(Var::lambda(2));
    CHECK(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)));
}

TEST_CASE("canonical_forms_respect_the_relation") {
    CoordSystem cs{{lambdas(2)}};
    Form sum = Form::dvar(Var::lambda(0)) + Form::dvar(Var::lambda(1)) + Form::dvar(Var::lambda(2));
    CHECK(canonicalize(sum, cs).is_zero());
    CHECK(canonicalize(sum, cs, Eliminate::First).is_zero());
    Form one = Form::scalar(L(0) + L(1) + L(2) - Poly(1));
    CHECK(canonicalize(one, cs).is_zero());
}

TEST_CASE("whitney_forms_have_unit_integral") {
    for (int p = 0; p <= 4; ++p) {
        CAPTURE(p);
        CHECK(integrate_top(whitney(lambdas(p)), CoordSystem{{lambdas(p)}}) == Poly(1));
    }
    // Free coordinates: the simplex {x >= 0, Σx <= 1} in R^n.
    CHECK(dirichlet_integral({1, 0}) == Rational(1, 6));
    CHECK(dirichlet_integral({1, 0, 0}) == Rational(1, 24));
}

TEST_CASE("whitney_form_of_an_edge") {
    Form w = whitney(lambdas(1));
    Form expected = L(0) * Form::dvar(Var::lambda(1)) - L(1) * Form::dvar(Var::lambda(0));
    CHECK(w == expected);
}

TEST_CASE("d_squared_vanishes") {
    std::mt19937_64 rng(11);
    auto vars = lambdas(4);
    for (int k = 0; k < 10; ++k) {
        Form a = Form::basis({vars[0], vars[3]}, random_poly(vars, 3, rng)) + Form::scalar(random_poly(vars, 4, rng));
        CHECK(a.d().d().is_zero());
    }
}

TEST_CASE("cone_primitive_inverts_d_on_closed_forms") {
    std::mt19937_64 rng(5);
    auto vars = lambdas(3);
    CoordSystem cs{{vars}};
    for (int k = 0; k < 5; ++k) {
        Form closed = Form::scalar(random_poly(vars, 3, rng)).d();
        Form h = poincare_primitive(closed, cs);
        CHECK(canonicalize(h.d() - closed, cs).is_zero());
    }
}

TEST_CASE("ode_solve_monomial_law") {
    // E + (1/r) Σ u ∂E/∂u = u^α has the solution (r/(r+|α|)) u^α.
    std::set<Var> vs{Var::u(0), Var::u(1)};
    for (unsigned r = 1; r <= 3; ++r)
        for (unsigned a = 0; a <= 3; ++a)
            for (unsigned b = 0; b <= 2; ++b) {
                Poly m = Poly::var(Var::u(0), a) * Poly::var(Var::u(1), b);
                if (a == 0) m = b ? Poly::var(Var::u(1), b) : Poly(1);
                Rational c(r, r + a + b);
                c.canonicalize();
                CHECK(ode_solve(m, vs, r) == m * c);
            }
    CHECK(ode_solve(Poly(), vs, 2).is_zero());
}

TEST_CASE("ode_solve_is_linear_with_zero_residual") {
    auto reports = suite_ode(Universe{}, 50);
    CHECK(reports.size() == 51);
    CHECK(all_pass(reports));
}

TEST_CASE("calculus_suite") { CHECK(all_pass(suite_calculus(Universe{}))); }
