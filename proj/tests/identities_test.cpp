#include "prismal/fixtures.hpp"
#include "prismal/verify.hpp"

#include <doctest.h>

using namespace prismal;

namespace {

void require_all(const std::vector<IdentityReport>& reports) {
    REQUIRE_FALSE(reports.empty());
    for (const auto& r : reports) {
        CAPTURE(r.identity);
        CAPTURE(r.case_desc);
        CAPTURE(r.residual);
        CHECK(r.pass);
    }
}

}  // namespace

TEST_CASE("lemcod_on_simplices_and_prisms") { require_all(suite_lemcod(Universe{})); }
TEST_CASE("lemcod_codim1_forms_are_a_basis") { require_all(suite_lemcod_basis(Universe{})); }
TEST_CASE("antiboundary") { require_all(suite_bord(Universe{})); }
TEST_CASE("satrap_and_satrapaz") { require_all(suite_satrap(Universe{})); }
TEST_CASE("pullback_of_whitney_forms") { require_all(suite_iminve(Universe{})); }
TEST_CASE("relative_whitney_forms") { require_all(suite_relative(builtin_fixtures())); }
TEST_CASE("fiber_integral_is_one") { require_all(suite_opicsg(builtin_fixtures())); }

TEST_CASE("satrapaz_reduces_to_satrap_for_constant_E") {
    for (auto [p, l] : {std::pair{2, 0}, {3, 1}, {4, 2}}) {
        CHECK(verify_satrap(p, l).pass);
        CHECK(verify_satrapaz(p, l, Poly(1)).pass);
    }
}

TEST_CASE("faceface_constant") {
    // ω(σ)u(1−u) = (−1)^{p+q}(p−q)C(p,q) ω′∧ω″∧du.
    for (int p = 1; p <= 5; ++p)
        for (int q = 0; q < p; ++q) {
            CAPTURE(p);
            CAPTURE(q);
            Rational expected = Rational((p + q) % 2 ? -1 : 1) * (p - q) * binomial(p, q);
            CHECK(faceface_constant(p, q) == expected);
        }
    require_all(suite_faceface(Universe{}));
}

// The printed constants of the face-to-face statements disagree with the
// exact computation; these cases pin where they agree and where they do not.
TEST_CASE("faceface_printed_constant") {
    CHECK(verify_faceface_literal(1, 0).pass);
    CHECK(verify_faceface_literal(3, 2).pass);
    CHECK_FALSE(verify_faceface_literal(2, 0).pass);  // magnitude off by (p−q)^2
    CHECK_FALSE(verify_faceface_literal(3, 1).pass);
    CHECK_FALSE(verify_faceface_literal(4, 3).pass);  // sign, odd q
}

TEST_CASE("facepri_printed_sign") {
    CHECK(verify_facepri_literal(1).pass);
    CHECK(verify_facepri_literal(3).pass);
    CHECK_FALSE(verify_facepri_literal(2).pass);
    CHECK_FALSE(verify_facepri_literal(4).pass);
    for (int p = 1; p <= 4; ++p) CHECK(verify_facepri(p).pass);
}

TEST_CASE("facepro_printed_formula") {
    CHECK(verify_facepro_literal({1, 1}, {0, 0}).pass);
    CHECK_FALSE(verify_facepro_literal({1, 2}, {0, 1}).pass);
    CHECK_FALSE(verify_facepro_literal({2, 2}, {1, 1}).pass);
    CHECK(verify_facepro({2, 2}, {1, 1}).pass);
    CHECK(verify_facepro({2, 1, 2}, {1, 0, 0}).pass);
}

TEST_CASE("reports_carry_canonical_residuals") {
    auto r = verify_facepri_literal(2);
    CHECK_FALSE(r.pass);
    CHECK_FALSE(r.residual.empty());
    CHECK(verify_bord(2).residual.empty());
}
