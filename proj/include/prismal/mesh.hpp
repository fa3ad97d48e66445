#pragma once

#include <climits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace prismal {

using VertexId = int;
using VertexList = std::vector<VertexId>;

/// Dimension assigned to the empty simplex.
inline constexpr int kEmptyDim = INT_MIN;

struct StructureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when loaded data violates an invariant; carries the offending cell.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A simplex with one concrete vertex order standing for its orientation.
struct Simplex {
    VertexList vertices;

    Simplex() = default;
    explicit Simplex(VertexList v) : vertices(std::move(v)) {}

    int dim() const { return vertices.empty() ? kEmptyDim : static_cast<int>(vertices.size()) - 1; }
    bool empty() const { return vertices.empty(); }
    /// Number of vertices minus one, or -1 for the empty simplex; the |σ| of exponents.
    int size_exp() const { return static_cast<int>(vertices.size()) - 1; }
    VertexList sorted() const;
    bool contains(VertexId v) const;
    bool operator==(const Simplex& o) const { return vertices == o.vertices; }
    bool operator<(const Simplex& o) const { return vertices < o.vertices; }
    std::string to_string() const;
};

/// Sign of the permutation taking `from` to `to` (same vertex set), 0 otherwise.
int permutation_sign(const VertexList& from, const VertexList& to);
/// True when a and b have the same vertex set and orientation.
bool same_orientation(const Simplex& a, const Simplex& b);

/// Formal sums keyed by sorted vertex lists; orientation lives in the sign.
using SimplexChain = std::map<VertexList, int>;

void chain_add(SimplexChain& chain, const Simplex& s, int coeff);
std::vector<Simplex> faces(const Simplex& s, int k);
/// [s;f] for a codimension-one face f.
int incidence_number(const Simplex& s, const Simplex& f);
SimplexChain boundary_chain(const Simplex& s);
SimplexChain boundary_of_chain(const SimplexChain& c);

/// Product of simplices; the factor order is part of the orientation.
struct Prism {
    std::vector<Simplex> factors;

    Prism() = default;
    explicit Prism(std::vector<Simplex> f) : factors(std::move(f)) {}
    static Prism from_simplex(const Simplex& s) { return Prism({s}); }
    Simplex to_simplex() const;

    int dim() const;
    bool operator==(const Prism& o) const { return factors == o.factors; }
    bool operator<(const Prism& o) const { return factors < o.factors; }
    std::string to_string() const;
};

using PrismKey = std::vector<VertexList>;
using PrismChain = std::map<PrismKey, int>;

void chain_add(PrismChain& chain, const Prism& p, int coeff);
PrismChain prism_boundary(const Prism& p);
PrismChain boundary_of_chain(const PrismChain& c);
/// [p;q] when q differs from p in exactly one factor, by a codim-1 face.
int prism_incidence(const Prism& p, const Prism& q);
/// Codimension-one faces of a prism, one factor replaced by a face in
/// induced order.
std::vector<Prism> prism_faces(const Prism& p);

Simplex join(const std::vector<Simplex>& parts);

/**
 * Abstract simplicial complex given by maximal simplices. All faces are
 * indexed on construction; every stored face uses increasing vertex order.
 */
class SimplicialComplex {
public:
    SimplicialComplex() = default;
    /// Throws ValidationError on repeated vertices, unknown vertices or
    /// maximal simplices that are faces of others.
    SimplicialComplex(VertexList vertices, std::vector<VertexList> maximal);

    const VertexList& vertices() const { return vertices_; }
    const std::vector<VertexList>& maximal() const { return maximal_; }
    bool contains(const VertexList& vertex_set) const;
    /// Nonempty simplices of dimension k in increasing vertex order.
    std::vector<Simplex> simplices(int k) const;
    std::vector<Simplex> all_simplices() const;
    int dim() const;

private:
    VertexList vertices_;
    std::vector<VertexList> maximal_;
    std::set<VertexList> faces_;
};

class SimplicialMorphism {
public:
    SimplicialMorphism() = default;
    /// Throws ValidationError when a vertex is unmapped or a simplex image is
    /// not a simplex of the target.
    SimplicialMorphism(SimplicialComplex source, SimplicialComplex target, std::map<VertexId, VertexId> vertex_map);

    const SimplicialComplex& source() const { return source_; }
    const SimplicialComplex& target() const { return target_; }
    const std::map<VertexId, VertexId>& vertex_map() const { return map_; }
    VertexId operator()(VertexId v) const { return map_.at(v); }
    /// Sorted vertex set of f(s).
    VertexList image(const VertexList& s) const;
    /// Vertices of s lying over y, in the order of s.
    VertexList fiber_vertices(const VertexList& s, VertexId y) const;
    /// Vertices of s lying over the vertex set of t, in the order of s.
    VertexList restrict_over(const VertexList& s, const VertexList& t) const;

private:
    SimplicialComplex source_;
    SimplicialComplex target_;
    std::map<VertexId, VertexId> map_;
};

/**
 * Prismal morphism to a simplex ρ in product form: one factor of each prism
 * maps onto a face of ρ through a vertex map, the other factors are fibers.
 */
struct ProjectedPrism {
    Prism prism;
    int base_factor = 0;
    std::map<VertexId, VertexId> to_base;
};

/// Fiber product of two projected prismal sets over a common simplex:
/// prisms (ρ′, fibers of the first, fibers of the second) over the common
/// image faces ρ′.
std::vector<Prism> fiber_product(const std::vector<ProjectedPrism>& a, const std::vector<ProjectedPrism>& b);

}  // namespace prismal
