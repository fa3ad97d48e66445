#pragma once

#include "prismal/fixtures.hpp"
#include "prismal/forms.hpp"
#include "prismal/mesh.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace prismal {

struct IdentityReport {
    std::string identity;
    std::string case_desc;
    bool pass = true;
    /// Canonical residual on failure.
    std::string residual;
};

struct Universe {
    int max_simplex_dim = 4;
    int max_prism_factors = 3;
    int max_factor_dim = 2;
    int max_base_dim = 2;
    int random_samples = 20;
    std::uint64_t seed = 20240601;
};

// Single cases. Simplices use λ_0..λ_p, prism factors use μ(j, i).
IdentityReport verify_lemcod_simplex(int p, const VertexList& face);
IdentityReport verify_lemcod_prism(const std::vector<int>& dims, const Prism& face);
IdentityReport verify_lemcod_basis(const std::vector<int>& dims);
IdentityReport verify_bord(int p);
IdentityReport verify_satrap(int p, int l);
IdentityReport verify_satrapaz(int p, int l, const Poly& E);
IdentityReport verify_iminve(const SimplicialMorphism& f, const Simplex& sigma);
/// Statement as printed: ω(σ) u(1−u) = (−1)^p C(p,q)/(p−q) ω′∧ω″∧du.
IdentityReport verify_faceface_literal(int p, int q);
/// Measured constant (−1)^{p+q}(p−q)C(p,q).
IdentityReport verify_faceface(int p, int q);
IdentityReport verify_facepri_literal(int p);
IdentityReport verify_facepri(int p);
IdentityReport verify_facepro_literal(const std::vector<int>& dims, const std::vector<int>& qs);
IdentityReport verify_facepro(const std::vector<int>& dims, const std::vector<int>& qs);

/// Exact ω(σ)u(1−u) / (ω′∧ω″∧du) for σ′ the first q+1 vertices.
Rational faceface_constant(int p, int q);

// Suites over the universe.
std::vector<IdentityReport> suite_lemcod(const Universe& u);
std::vector<IdentityReport> suite_lemcod_basis(const Universe& u);
std::vector<IdentityReport> suite_bord(const Universe& u);
std::vector<IdentityReport> suite_satrap(const Universe& u);
std::vector<IdentityReport> suite_iminve(const Universe& u);
/// Literal statements of faceface, facepri and facepro.
std::vector<IdentityReport> suite_faceface_literal(const Universe& u);
/// Corrected constants and signs.
std::vector<IdentityReport> suite_faceface(const Universe& u);
std::vector<IdentityReport> suite_relative(const std::vector<NamedMorphism>& fixtures);
std::vector<IdentityReport> suite_opicsg(const std::vector<NamedMorphism>& fixtures);
std::vector<IdentityReport> suite_structure(const std::vector<NamedMorphism>& fixtures, const Universe& u);
std::vector<IdentityReport> suite_ode(const Universe& u, int samples = 50);
std::vector<IdentityReport> suite_calculus(const Universe& u);

/// Random polynomial with small integer coefficients.
Poly random_poly(const std::vector<Var>& vars, unsigned max_degree, std::mt19937_64& rng, int terms = 6);

/// Rank over Q of the canonical coefficient vectors.
std::size_t form_rank(const std::vector<Form>& forms, const CoordSystem& cs);

bool all_pass(const std::vector<IdentityReport>& reports);

}  // namespace prismal
