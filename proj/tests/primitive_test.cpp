#include "prismal/fixtures.hpp"
#include "prismal/primitive.hpp"
#include "prismal/sheaf.hpp"
#include "prismal/verify.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace prismal;

namespace {

Poly L(int v) { return Poly::var(Var::lambda(v)); }

std::vector<Var> source_lambdas(const SimplicialMorphism& f) {
    std::vector<Var> out;
    for (VertexId v : f.source().vertices()) out.push_back(Var::lambda(v));
    return out;
}

/// dξ plus horizontal terms p_y d(f*t_y): closed along fibers, not closed.
Form fiberwise_exact_1form(const SimplicialMorphism& f, std::mt19937_64& rng) {
    auto vars = source_lambdas(f);
    Form omega = Form::scalar(random_poly(vars, 3, rng)).d();
    for (VertexId y : f.target().vertices()) {
        Poly ty;
        for (VertexId v : f.source().vertices())
            if (f(v) == y) ty += L(v);
        omega += random_poly(vars, 2, rng, 3) * Form::scalar(ty).d();
    }
    return omega;
}

void check_pipeline(const PrimitiveResult& res) {
    CHECK(res.residuals_zero());
    CHECK(res.horizontal_ok());
    CHECK(res.descent_failures.empty());
    CHECK(res.glue_failures.empty());
    for (const auto& g : res.gluing) {
        CAPTURE(Simplex(g.sigma1).to_string());
        CAPTURE(Simplex(g.sigma2).to_string());
        CHECK(g.ok);
    }
    for (const auto& h : res.horizontal) {
        CAPTURE(h.witness);
        CHECK(h.ok);
    }
}

}  // namespace

TEST_CASE("primitive_of_fiberwise_exact_1forms") {
    std::mt19937_64 rng(42);
    for (const auto& [name, f] : builtin_fixtures()) {
        for (int k = 0; k < 3; ++k) {
            CAPTURE(name);
            CAPTURE(k);
            check_pipeline(run_primitive(f, fiberwise_exact_1form(f, rng), 1));
        }
    }
}

TEST_CASE("primitive_in_higher_degree") {
    std::mt19937_64 rng(8);
    auto f = figure5_morphism();
    auto vars = source_lambdas(f);
    for (int r = 2; r <= 3; ++r) {
        CAPTURE(r);
        Form xi = Form::scalar(random_poly(vars, 2, rng));
        for (int k = 0; k < r - 1; ++k) xi = wedge(xi, Form::scalar(random_poly(vars, 1, rng, 3)).d());
        auto res = run_primitive(f, xi.d(), r);
        CHECK(res.residuals_zero());
        CHECK(res.horizontal_ok());
        CHECK(res.descent_failures.empty());
        // No gluing step exists for r >= 2. Prisms built purely from the C- and
        // D-parts agree on common faces; a cone correction on either side can
        // break agreement, and that is reported rather than repaired.
        std::map<VertexList, bool> corrected;
        for (const auto& pp : res.prisms) corrected[pp.prism.sigma.vertices] = !pp.correction.is_zero();
        for (const auto& g : res.gluing)
            if (!corrected[g.sigma1] && !corrected[g.sigma2]) CHECK(g.ok);
    }
}

TEST_CASE("higher_degree_without_corrections_glues") {
    // Seed picked so that no prism needs the cone correction.
    std::mt19937_64 rng(7);
    auto f = figure5_morphism();
    auto vars = source_lambdas(f);
    Form xi = Form::scalar(random_poly(vars, 2, rng));
    xi = wedge(xi, Form::scalar(random_poly(vars, 1, rng, 3)).d());
    auto res = run_primitive(f, xi.d(), 2);
    REQUIRE(res.corrected_prisms() == 0);
    check_pipeline(res);
}

TEST_CASE("figure1_construction_details") {
    auto f = figure1_morphism();
    Poly xi = L(20) * L(21) * L(10) + L(11) * L(11) * L(22) + Rational(3, 2) * L(21) * L(30) + L(20) * L(22);
    Form omega = Form::scalar(xi).d() + (L(10) * L(21)) * Form::scalar(L(20) + L(21) + L(22)).d();
    auto res = run_primitive(f, omega, 1);
    check_pipeline(res);
    std::size_t unsigned_misses = 0;
    for (const auto& pp : res.prisms) {
        CHECK(pp.c_residual.is_zero());  // the signed C-part alone is exact here
        CHECK(lemetb_residual(pp.decomposition).is_zero());
        for (const auto& e : pp.C.entries) CHECK(scalar_equation_residual(e, 1).is_zero());
        unsigned_misses += !pp.literal_residual.is_zero();
    }
    // Without the fiber incidences the C-part misses on the two-vertex fibers.
    CHECK(unsigned_misses == 4);
}

TEST_CASE("vertical_decomposition_recovers_combinations") {
    // Any family of coefficients rebuilds a form whose decomposition has zero residual.
    std::mt19937_64 rng(3);
    auto f = figure5_morphism();
    PrismData P = make_prism(f, Simplex({10, 11, 20, 21, 30, 31}));
    const auto mu_set = P.mu_vars();
    std::vector<Var> mus(mu_set.begin(), mu_set.end());
    for (int r = 1; r <= 3; ++r) {
        Form beta;
        for (const auto& parts : relative_faces(P, r))
            beta += (t_monomial(P.tau, parts) * random_poly(mus, 2, rng, 3)) * relative_whitney(P.tau, parts);
        beta = vertical_part(beta, P);
        CHECK(lemetb_residual(decompose_vertical(beta, P, r)).is_zero());
    }
}

TEST_CASE("horizontal_specialization_is_coherent") {
    // Specializing to τ″ directly equals going through τ′.
    std::mt19937_64 rng(19);
    auto f = figure5_morphism();
    auto vars = source_lambdas(f);
    Form xi = wedge(Form::scalar(random_poly(vars, 2, rng)), Form::scalar(random_poly(vars, 1, rng, 3)).d());
    auto res = run_primitive(f, xi.d(), 2);
    auto specialize = [](const Form& H, const CoordSystem& ctx, const std::vector<Var>& gone) {
        CoordSystem cs = ctx;
        auto& g = cs.groups.front();
        std::stable_partition(g.begin(), g.end(), [&](Var v) { return std::find(gone.begin(), gone.end(), v) != gone.end(); });
        return restrict_zero(canonicalize(H, cs), {gone.begin(), gone.end()});
    };
    std::size_t checked = 0;
    for (const auto& pp : res.prisms) {
        if (pp.prism.tau.vertices.size() != 3) continue;
        const auto& ctx = pp.prism.context;
        Var t1 = Var::t(pp.prism.tau.vertices[1]), t2 = Var::t(pp.prism.tau.vertices[2]);
        Form direct = specialize(pp.H, ctx, {t1, t2});
        CoordSystem mid = ctx;
        std::erase(mid.groups.front(), t2);
        Form two_step = specialize(specialize(pp.H, ctx, {t2}), mid, {t1});
        CoordSystem end = mid;
        std::erase(end.groups.front(), t1);
        CHECK(canonicalize(direct - two_step, end).is_zero());
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("not_fiberwise_closed_is_rejected") {
    auto f = figure3_morphism();
    Form omega = L(10) * Form::dvar(Var::lambda(20));
    CHECK_THROWS_AS(run_primitive(f, omega, 1), ExactnessError);
    try {
        run_primitive(f, omega, 1);
    } catch (const ExactnessError& e) {
        CHECK_FALSE(e.residual.is_zero());
    }
    CHECK_THROWS_AS(run_primitive(f, omega, 2), std::domain_error);
}

TEST_CASE("descent_lifts_back") {
    std::mt19937_64 rng(4);
    auto f = base2d_morphism();
    auto res = run_primitive(f, fiberwise_exact_1form(f, rng), 1);
    CHECK(res.descent_failures.empty());
    CHECK(res.H_S.size() == res.prisms.size());
    // H_S lives on the simplex: only λ and u = 1/t.
    for (const auto& [sigma, form] : res.H_S)
        for (Var v : form.variables()) CHECK((v.kind() == VarKind::Lambda || v.kind() == VarKind::U));
}

TEST_CASE("pullback_weight_of_a_triangle_over_an_edge") {
    auto f = figure1_morphism();
    PullbackWeight w = pullback_weight(f, Simplex({10, 20, 21}));
    // p!/(|σ_0|! |σ_1|! s!) = 2!/(0! 1! 1!)
    CHECK(w.constant == 2);
    CHECK(std::abs(w.sign) == 1);
}

TEST_CASE("numeric_oracle_has_first_order_bias") {
    auto f = figure1_morphism();
    Poly xi = L(20) * L(21) * L(10) + L(11) * L(11) * L(22) + Rational(3, 2) * L(21) * L(30) + L(20) * L(22);
    Form omega = Form::scalar(xi).d() + (L(10) * L(21)) * Form::scalar(L(20) + L(21) + L(22)).d();
    double worst = 0, worst_extrapolated = 0;
    for (const auto& s : oracle_samples(omega, f, 1, 1e-4)) {
        worst = std::max(worst, std::abs(s.estimate - s.exact));
        worst_extrapolated = std::max(worst_extrapolated, std::abs(s.extrapolated - s.exact));
    }
    // The homothety is centred at x, so the estimate is off by O(ε).
    CHECK(worst > 1e-6);
    CHECK(worst < 1e-4);
    CHECK(worst_extrapolated < 1e-9);
}

TEST_CASE("exact_coefficients_match_extrapolated_estimates") {
    std::mt19937_64 rng(12);
    auto f = base2d_morphism();
    Form omega = fiberwise_exact_1form(f, rng);
    auto samples = oracle_samples(omega, f, 1, 1e-4);
    CHECK(samples.size() == 3);
    for (const auto& s : samples) CHECK(std::abs(s.extrapolated - s.exact) < 1e-9);
}
