#include "prismal/mesh.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <fmt/ranges.h>

namespace prismal {

VertexList Simplex::sorted() const {
    VertexList v = vertices;
    std::sort(v.begin(), v.end());
    return v;
}

bool Simplex::contains(VertexId v) const { return std::find(vertices.begin(), vertices.end(), v) != vertices.end(); }

std::string Simplex::to_string() const { return fmt::format("({})", fmt::join(vertices, ",")); }

int permutation_sign(const VertexList& from, const VertexList& to) {
    if (from.size() != to.size()) return 0;
    std::vector<std::size_t> perm;
    perm.reserve(from.size());
    for (VertexId v : from) {
        auto it = std::find(to.begin(), to.end(), v);
        if (it == to.end()) return 0;
        perm.push_back(static_cast<std::size_t>(it - to.begin()));
    }
    int sign = 1;
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        std::size_t len = 0;
        for (std::size_t j = i; !seen[j]; j = perm[j]) {
            seen[j] = true;
            ++len;
        }
        if (len % 2 == 0) sign = -sign;
    }
    return sign;
}

bool same_orientation(const Simplex& a, const Simplex& b) { return permutation_sign(a.vertices, b.vertices) == 1; }

void chain_add(SimplexChain& chain, const Simplex& s, int coeff) {
    VertexList key = s.sorted();
    int sign = permutation_sign(s.vertices, key);
    int& c = chain[key];
    c += sign * coeff;
    if (c == 0) chain.erase(key);
}

std::vector<Simplex> faces(const Simplex& s, int k) {
    const int n = static_cast<int>(s.vertices.size());
    if (k < 0 || k >= n) throw StructureError(fmt::format("face dimension {} out of range for {}", k, s.to_string()));
    std::vector<Simplex> out;
    std::vector<bool> pick(static_cast<std::size_t>(n), false);
    std::fill(pick.begin(), pick.begin() + k + 1, true);
    do {
        VertexList v;
        for (int i = 0; i < n; ++i)
            if (pick[static_cast<std::size_t>(i)]) v.push_back(s.vertices[static_cast<std::size_t>(i)]);
        out.emplace_back(std::move(v));
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return out;
}

int incidence_number(const Simplex& s, const Simplex& f) {
    if (f.vertices.size() + 1 == s.vertices.size()) {
        for (std::size_t i = 0; i < s.vertices.size(); ++i) {
            if (f.contains(s.vertices[i])) continue;
            VertexList induced = s.vertices;
            induced.erase(induced.begin() + static_cast<std::ptrdiff_t>(i));
            int parity = permutation_sign(induced, f.vertices);
            if (parity == 0) break;
            return (i % 2 == 0 ? 1 : -1) * parity;
        }
    }
    throw StructureError(fmt::format("{} is not a codimension-1 face of {}", f.to_string(), s.to_string()));
}

SimplexChain boundary_chain(const Simplex& s) {
    SimplexChain out;
    if (s.vertices.size() < 2) return out;
    for (std::size_t i = 0; i < s.vertices.size(); ++i) {
        VertexList face = s.vertices;
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
        chain_add(out, Simplex(face), i % 2 == 0 ? 1 : -1);
    }
    return out;
}

SimplexChain boundary_of_chain(const SimplexChain& c) {
    SimplexChain out;
    for (const auto& [key, coeff] : c)
        for (const auto& [fk, fc] : boundary_chain(Simplex(key))) chain_add(out, Simplex(fk), coeff * fc);
    return out;
}

Simplex Prism::to_simplex() const {
    if (factors.size() != 1) throw StructureError("prism with several factors is not a simplex");
    return factors.front();
}

int Prism::dim() const {
    int d = 0;
    for (const auto& f : factors) {
        if (f.empty()) return kEmptyDim;
        d += f.dim();
    }
    return d;
}

std::string Prism::to_string() const {
    std::vector<std::string> parts;
    for (const auto& f : factors) parts.push_back(f.to_string());
    return fmt::format("{}", fmt::join(parts, "x"));
}

void chain_add(PrismChain& chain, const Prism& p, int coeff) {
    PrismKey key;
    int sign = coeff;
    for (const auto& f : p.factors) {
        VertexList sorted = f.sorted();
        sign *= permutation_sign(f.vertices, sorted);
        key.push_back(std::move(sorted));
    }
    int& c = chain[key];
    c += sign;
    if (c == 0) chain.erase(key);
}

PrismChain prism_boundary(const Prism& p) {
    PrismChain out;
    int prefix = 0;
    for (std::size_t j = 0; j < p.factors.size(); ++j) {
        int sign = prefix % 2 == 0 ? 1 : -1;
        for (const auto& [fk, fc] : boundary_chain(p.factors[j])) {
            Prism q = p;
            q.factors[j] = Simplex(fk);
            chain_add(out, q, sign * fc);
        }
        prefix += p.factors[j].dim();
    }
    return out;
}

PrismChain boundary_of_chain(const PrismChain& c) {
    PrismChain out;
    for (const auto& [key, coeff] : c) {
        Prism p;
        for (const auto& f : key) p.factors.emplace_back(f);
        for (const auto& [fk, fc] : prism_boundary(p)) {
            Prism q;
            for (const auto& f : fk) q.factors.emplace_back(f);
            chain_add(out, q, coeff * fc);
        }
    }
    return out;
}

int prism_incidence(const Prism& p, const Prism& q) {
    if (p.factors.size() == q.factors.size()) {
        int changed = -1;
        for (std::size_t j = 0; j < p.factors.size(); ++j) {
            if (p.factors[j] == q.factors[j]) continue;
            if (changed >= 0) {
                changed = -2;
                break;
            }
            changed = static_cast<int>(j);
        }
        if (changed >= 0) {
            int prefix = 0;
            for (int j = 0; j < changed; ++j) prefix += p.factors[static_cast<std::size_t>(j)].dim();
            int inc = incidence_number(p.factors[static_cast<std::size_t>(changed)],
                                       q.factors[static_cast<std::size_t>(changed)]);
            return (prefix % 2 == 0 ? 1 : -1) * inc;
        }
    }
    throw StructureError(fmt::format("{} is not a codimension-1 face of {}", q.to_string(), p.to_string()));
}

std::vector<Prism> prism_faces(const Prism& p) {
    std::vector<Prism> out;
    for (std::size_t j = 0; j < p.factors.size(); ++j) {
        const Simplex& s = p.factors[j];
        if (s.dim() < 1) continue;
        for (const auto& f : faces(s, s.dim() - 1)) {
            Prism q = p;
            q.factors[j] = f;
            out.push_back(std::move(q));
        }
    }
    return out;
}

Simplex join(const std::vector<Simplex>& parts) {
    VertexList v;
    std::set<VertexId> seen;
    for (const auto& part : parts) {
        for (VertexId x : part.vertices) {
            if (!seen.insert(x).second) throw StructureError(fmt::format("join: vertex {} is shared", x));
            v.push_back(x);
        }
    }
    return Simplex(v);
}

SimplicialComplex::SimplicialComplex(VertexList vertices, std::vector<VertexList> maximal)
    : vertices_(std::move(vertices)) {
    std::sort(vertices_.begin(), vertices_.end());
    if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
        throw ValidationError("complex: repeated vertex id");
    for (VertexId v : vertices_)
        if (v < 0) throw ValidationError(fmt::format("complex: negative vertex id {}", v));
    for (auto& m : maximal) {
        Simplex s(m);
        if (m.empty()) throw ValidationError("complex: empty maximal simplex");
        std::sort(m.begin(), m.end());
        if (std::adjacent_find(m.begin(), m.end()) != m.end())
            throw ValidationError("complex: simplex " + s.to_string() + " repeats a vertex");
        for (VertexId v : m)
            if (!std::binary_search(vertices_.begin(), vertices_.end(), v))
                throw ValidationError("complex: simplex " + s.to_string() + " uses unknown vertex");
    }
    std::sort(maximal.begin(), maximal.end());
    maximal.erase(std::unique(maximal.begin(), maximal.end()), maximal.end());
    for (const auto& a : maximal)
        for (const auto& b : maximal)
            if (a != b && std::includes(b.begin(), b.end(), a.begin(), a.end()))
                throw ValidationError("complex: " + Simplex(a).to_string() + " is a face of " +
                                      Simplex(b).to_string() + " but listed as maximal");
    maximal_ = std::move(maximal);
    for (VertexId v : vertices_) faces_.insert({v});
    for (const auto& m : maximal_) {
        Simplex s(m);
        for (int k = 0; k <= s.dim(); ++k)
            for (const auto& f : faces(s, k)) faces_.insert(f.vertices);
    }
}

bool SimplicialComplex::contains(const VertexList& vertex_set) const {
    VertexList key = vertex_set;
    std::sort(key.begin(), key.end());
    return faces_.count(key) > 0;
}

std::vector<Simplex> SimplicialComplex::simplices(int k) const {
    std::vector<Simplex> out;
    for (const auto& f : faces_)
        if (static_cast<int>(f.size()) == k + 1) out.emplace_back(f);
    return out;
}

std::vector<Simplex> SimplicialComplex::all_simplices() const {
    std::vector<Simplex> out;
    for (const auto& f : faces_) out.emplace_back(f);
    return out;
}

int SimplicialComplex::dim() const {
    int d = -1;
    for (const auto& m : maximal_) d = std::max(d, static_cast<int>(m.size()) - 1);
    return d;
}

SimplicialMorphism::SimplicialMorphism(SimplicialComplex source, SimplicialComplex target,
                                       std::map<VertexId, VertexId> vertex_map)
    : source_(std::move(source)), target_(std::move(target)), map_(std::move(vertex_map)) {
    for (VertexId v : source_.vertices()) {
        auto it = map_.find(v);
        if (it == map_.end()) throw ValidationError(fmt::format("morphism: vertex {} is not mapped", v));
        if (!target_.contains({it->second}))
            throw ValidationError(fmt::format("morphism: vertex {} maps to unknown vertex {}", v, it->second));
    }
    for (const auto& [v, w] : map_)
        if (!source_.contains({v})) throw ValidationError(fmt::format("morphism: unknown source vertex {}", v));
    for (const auto& m : source_.maximal())
        if (!target_.contains(image(m)))
            throw ValidationError("morphism: image of " + Simplex(m).to_string() + " is not a simplex");
}

VertexList SimplicialMorphism::image(const VertexList& s) const {
    VertexList out;
    for (VertexId v : s) out.push_back(map_.at(v));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

VertexList SimplicialMorphism::fiber_vertices(const VertexList& s, VertexId y) const {
    VertexList out;
    for (VertexId v : s)
        if (map_.at(v) == y) out.push_back(v);
    return out;
}

VertexList SimplicialMorphism::restrict_over(const VertexList& s, const VertexList& t) const {
    VertexList out;
    for (VertexId v : s)
        if (std::find(t.begin(), t.end(), map_.at(v)) != t.end()) out.push_back(v);
    return out;
}

std::vector<Prism> fiber_product(const std::vector<ProjectedPrism>& a, const std::vector<ProjectedPrism>& b) {
    auto image = [](const ProjectedPrism& p) {
        VertexList img;
        for (VertexId v : p.prism.factors.at(static_cast<std::size_t>(p.base_factor)).vertices)
            img.push_back(p.to_base.at(v));
        std::sort(img.begin(), img.end());
        if (std::adjacent_find(img.begin(), img.end()) != img.end())
            throw StructureError("fiber product: base factor does not map isomorphically");
        return img;
    };
    std::set<Prism> out;
    for (const auto& pa : a) {
        VertexList ia = image(pa);
        for (const auto& pb : b) {
            VertexList ib = image(pb);
            VertexList common;
            std::set_intersection(ia.begin(), ia.end(), ib.begin(), ib.end(), std::back_inserter(common));
            if (common.empty()) continue;
            Prism p;
            p.factors.emplace_back(common);
            for (const auto* side : {&pa, &pb})
                for (std::size_t j = 0; j < side->prism.factors.size(); ++j)
                    if (static_cast<int>(j) != side->base_factor) p.factors.push_back(side->prism.factors[j]);
            out.insert(p);
        }
    }
    // Keep maximal cells only; the rest are faces.
    std::vector<Prism> result;
    for (const auto& p : out) {
        bool is_face = false;
        for (const auto& q : out) {
            if (q == p || q.factors.size() != p.factors.size()) continue;
            bool inside = true;
            for (std::size_t j = 0; j < p.factors.size() && inside; ++j) {
                VertexList ps = p.factors[j].sorted(), qs = q.factors[j].sorted();
                inside = std::includes(qs.begin(), qs.end(), ps.begin(), ps.end());
            }
            if (inside) {
                is_face = true;
                break;
            }
        }
        if (!is_face) result.push_back(p);
    }
    return result;
}

}  // namespace prismal
