#pragma once

#include "prismal/forms.hpp"
#include "prismal/mesh.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace prismal {

/// A cell of a stalk. Simplicial sheaves use one factor; prismal stalks of
/// P_f use (τ, σ_0, ..., σ_s) with σ_j lying over the j-th vertex of τ.
struct SheafCell {
    std::vector<Simplex> factors;

    bool operator==(const SheafCell& o) const { return factors == o.factors; }
    bool operator<(const SheafCell& o) const { return factors < o.factors; }
    Prism as_prism() const { return Prism(factors); }
    std::string to_string() const { return as_prism().to_string(); }
};

enum class SheafKind { Simplicial, Prismal };

struct PrismalSheaf {
    SheafKind kind = SheafKind::Simplicial;
    SimplicialComplex base;
    /// Vertex projection to the base for simplicial cells.
    std::map<VertexId, VertexId> projection;
    /// Keyed by the sorted vertex list of τ.
    std::map<VertexList, std::vector<SheafCell>> stalks;
    /// (τ′, τ) to the image index in F(τ′) of every cell of F(τ); -1 is the
    /// empty cell.
    std::map<std::pair<VertexList, VertexList>, std::vector<int>> specialization;

    const std::vector<SheafCell>& stalk(const VertexList& tau) const { return stalks.at(tau); }
    int index_of(const VertexList& tau, const SheafCell& c) const;
};

PrismalSheaf build_Sf(const SimplicialMorphism& f);
PrismalSheaf build_Pf(const SimplicialMorphism& f);

/// The cell π(σ) = τ × σ_0 × ... × σ_s of a simplex over τ = f(σ).
SheafCell pi_of(const SimplicialMorphism& f, const Simplex& sigma);
/// The fiber factors σ_j of σ, in the vertex order of τ = f(σ).
std::vector<Simplex> fiber_factors(const SimplicialMorphism& f, const Simplex& sigma);

struct CheckResult {
    bool ok = true;
    std::string witness;

    void fail(std::string why) {
        if (ok) witness = std::move(why);
        ok = false;
    }
};

CheckResult check_Sf_characterization(const PrismalSheaf& F);

struct PfCheck : CheckResult {
    /// S rebuilt from joins of the factors, keyed like stalks.
    std::map<VertexList, std::set<VertexList>> reconstructed;
};
PfCheck check_Pf_characterization(const PrismalSheaf& F);

/// Whether π in P_f(τ) keeps its relative dimension over τ′.
bool is_equidimensional(const SheafCell& pi, const VertexList& tau_prime);
int relative_dim(const SheafCell& pi);

struct FiberType {
    Simplex tau;
    std::vector<Prism> pieces;
};
FiberType fiber_structure(const PrismalSheaf& F, const VertexList& tau);

/// Prism coordinates (t, μ) of a point of σ.
struct PrismPoint {
    std::map<VertexId, Rational> t;
    std::map<std::pair<VertexId, VertexId>, Rational> mu;
};

/// Throws StructureError when some t_j vanishes.
PrismPoint theta_sigma(const SimplicialMorphism& f, const Simplex& sigma, const std::map<VertexId, Rational>& lambda);
std::map<VertexId, Rational> psi_sigma(const SimplicialMorphism& f, const Simplex& sigma, const PrismPoint& p);

/// λ_v ↦ t_{f(v)} μ_{f(v),v} for the vertices of σ.
std::map<Var, Poly> psi_images(const SimplicialMorphism& f, const Simplex& sigma);

std::vector<Var> lambda_coords(const Simplex& s);
std::vector<Var> t_coords(const Simplex& tau);
std::vector<Var> mu_coords(VertexId y, const Simplex& fiber);

CoordSystem simplex_context(const Simplex& s);
/// Groups: t over τ, then μ_j for each fiber factor.
CoordSystem prism_context(const Simplex& tau, const std::vector<Simplex>& fibers);
/// μ groups only; t stays a parameter.
CoordSystem fiber_context(const Simplex& tau, const std::vector<Simplex>& fibers);

}  // namespace prismal
