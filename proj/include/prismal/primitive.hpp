#pragma once

#include "prismal/forms.hpp"
#include "prismal/mesh.hpp"
#include "prismal/sheaf.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace prismal {

/// Coordinates of a prism π(σ) = τ × σ_0 × ... × σ_s.
struct PrismData {
    Simplex sigma;
    Simplex tau;
    std::vector<Simplex> fibers;
    CoordSystem context;        // t group then μ groups
    CoordSystem fiber_context;  // μ groups only

    int relative_dim() const;
    std::set<Var> mu_vars() const { return fiber_context.variables(); }
    std::set<Var> t_vars() const;
};

PrismData make_prism(const SimplicialMorphism& f, const Simplex& sigma);

/// Sign (−1)^{α(σ,ν)} and constant p!/(Π|σ_j|! s!) of the pullback formula,
/// with a(ν) read off the stored vertex order of σ.
struct PullbackWeight {
    int sign = 1;
    Rational constant = 1;
};
PullbackWeight pullback_weight(const SimplicialMorphism& f, const Simplex& sigma);

/// t_0^{e_0} ... t_s^{e_s} with e_j = |φ_j|.
Poly t_monomial(const Simplex& tau, const std::vector<Simplex>& parts);
/// ∧_j ω(φ_j) in the μ coordinates of the prism.
Form relative_whitney(const Simplex& tau, const std::vector<Simplex>& parts);

/// Vertical part of a form on the prism: canonical in the μ groups, every
/// dt term dropped; t stays free.
Form vertical_part(const Form& a, const PrismData& prism);
/// d followed by vertical_part.
Form relative_d(const Form& a, const PrismData& prism);
/// a ∧ e*ω(τ) canonicalizes to zero.
bool is_fiberwise_zero(const Form& a, const PrismData& prism);

/// Faces φ of σ with image τ and relative dimension r, as fiber factors.
std::vector<std::vector<Simplex>> relative_faces(const PrismData& prism, int r);

struct FaceCoefficient {
    Simplex phi;                      // in the order induced by σ
    std::vector<Simplex> parts;       // φ_0, ..., φ_s
    PullbackWeight weight;            // (−1)^α and (r+s)!/(Π|φ_j|! s!)
    Poly A;                           // A_φ∘ψ, in (t, μ)
};

struct FiberwiseDecomposition {
    PrismData prism;
    int r = 0;
    Form vertical;  // vertical part of ψ*η
    std::vector<FaceCoefficient> faces;
};

/// Coefficients of Prop. LEMETB: A_φ t^{|φ|} is ψ*η evaluated on the unit
/// r-vector of the fiber of φ. Throws std::domain_error on a degree mismatch.
FiberwiseDecomposition extract_A(const Form& eta, const SimplicialMorphism& f, const Simplex& sigma, int r);
/// Same, starting from a vertical form already in prism coordinates.
FiberwiseDecomposition decompose_vertical(const Form& vertical, const PrismData& prism, int r);
/// ψ*η − Σ t^{|φ|} A_φ ω(π(φ)/τ;π(σ)), vertical and canonical.
Form lemetb_residual(const FiberwiseDecomposition& d);
/// Exact Ã_φ at a point of σ given by barycentric coordinates.
Rational a_tilde_at(const FiberwiseDecomposition& d, std::size_t face, const std::map<VertexId, Rational>& x);

/// ε-homothety estimate of Ã_φ(x) by Gauss quadrature in double precision.
double a_tilde_estimate(const Form& eta, const SimplicialMorphism& f, const Simplex& sigma,
                        const std::vector<Simplex>& parts, const std::map<VertexId, Rational>& x, double eps);

/// One comparison of the ε-estimate with the exact Ã_φ at an interior point.
struct OracleSample {
    VertexList sigma;
    VertexList phi;
    double exact = 0;
    double estimate = 0;
    /// 2R(ε/2) − R(ε), which cancels the first-order term in ε.
    double extrapolated = 0;
};
/// Samples every r-face of every maximal simplex at the point with
/// barycentric weights proportional to 1, 2, ..., p+1.
std::vector<OracleSample> oracle_samples(const Form& eta, const SimplicialMorphism& f, int r, double eps);

struct CEntry {
    Simplex phi;
    std::vector<Simplex> phi_parts;
    std::vector<Simplex> gamma_parts;
    std::size_t j = 0;   // index of the base vertex where φ and γ differ
    VertexId dropped{};  // the vertex of φ not in γ
    int n = 0;           // n(φ/τ) for this j
    int incidence = 1;   // fiber-prism incidence [π(φ);π(γ)]
    Poly A_gamma;        // A_φ written without the dropped coordinate
    std::set<Var> ode_vars;
    Poly C_tilde;
    Poly C;  // t_j C̃
};

struct CPart {
    int r = 0;
    std::vector<CEntry> entries;
};

/// Eq. (chache) for every (φ, γ); throws StructureError when r < 1.
CPart assemble_C(const FiberwiseDecomposition& d);
/// C̃ + (1/r) Σ u ∂C̃/∂u − A/n for one entry; zero by construction.
Poly scalar_equation_residual(const CEntry& e, int r);
/// Σ t^{|φ|} (±) C̃ ω(π(γ)/τ;π(σ)); `signed_terms` applies the incidences.
Form c_part_form(const CPart& c, const PrismData& prism, bool signed_terms);

struct ExactnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
    Form residual;
    ExactnessError(const std::string& what, Form res) : std::runtime_error(what), residual(std::move(res)) {}
};

/// Eq. (equazz): the (r−1)-form q is decomposed and integrated one degree
/// down. Throws ExactnessError when q is not fiberwise closed.
CPart solve_vertical_gluing(const Form& q, const PrismData& prism, int r);

struct PrismPrimitive {
    PrismData prism;
    FiberwiseDecomposition decomposition;
    CPart C;
    std::optional<CPart> D;
    Form H_C;             // signed C-part
    Form literal_residual;  // β − d_e(unsigned C-part)
    Form c_residual;        // β − d_e(H_C)
    Form correction;        // cone primitive of c_residual
    Poly fiber_constant;    // function of t added by gluing, r = 1 only
    Form H;
    Form theodg_residual;   // de ∧ (ψ*ω − dH), canonical
};

struct HorizontalReport {
    VertexList tau;
    VertexList tau_prime;
    VertexList sigma;
    bool vanishing_case = false;  // dim_rel σ|τ′ < r
    bool ok = true;
    std::string witness;
};

struct GluingReport {
    VertexList tau;
    VertexList sigma1;
    VertexList sigma2;
    bool ok = true;
};

struct PrimitiveOptions {
    bool check_horizontal = true;
    bool check_gluing = true;
    /// For r = 1, shift each prism primitive by a function of t so that the
    /// primitives agree across faces, horizontally and over the same τ.
    bool glue_fibers = true;
};

struct PrimitiveResult {
    int r = 0;
    std::vector<PrismPrimitive> prisms;
    std::vector<HorizontalReport> horizontal;
    std::vector<GluingReport> gluing;
    /// H_S on each simplex in (λ, u) with u_y standing for 1/t_y.
    std::map<VertexList, Form> H_S;
    std::vector<std::string> descent_failures;
    std::vector<std::string> glue_failures;

    bool residuals_zero() const;
    bool horizontal_ok() const;
    std::size_t corrected_prisms() const;
};

/// Runs the construction on every prism π(σ) of relative dimension ≥ r.
/// Throws ExactnessError when ψ*ω is not closed along some fiber.
PrimitiveResult run_primitive(const SimplicialMorphism& f, const Form& omega, int r, const PrimitiveOptions& opt = {});

/// Variable standing for 1/t_y in H_S.
Var inverse_t(VertexId y);

}  // namespace prismal
