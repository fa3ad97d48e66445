#include "prismal/sheaf.hpp"

#include <algorithm>
#include <functional>
#include <fmt/format.h>

namespace prismal {

namespace {

bool is_subset(const VertexList& small, const VertexList& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

/// Nonempty faces of τ, including τ.
std::vector<VertexList> faces_of(const VertexList& tau) {
    std::vector<VertexList> out;
    Simplex t(tau);
    for (int k = 0; k <= t.dim(); ++k)
        for (const auto& f : faces(t, k)) out.push_back(f.vertices);
    return out;
}

void fill_specializations(PrismalSheaf& F, const std::function<int(const VertexList&, const SheafCell&)>& image_of) {
    for (const auto& [tau, cells] : F.stalks) {
        for (const auto& tp : faces_of(tau)) {
            std::vector<int> idx;
            idx.reserve(cells.size());
            for (const auto& c : cells) idx.push_back(image_of(tp, c));
            F.specialization[{tp, tau}] = std::move(idx);
        }
    }
}

}  // namespace

int PrismalSheaf::index_of(const VertexList& tau, const SheafCell& c) const {
    const auto& cells = stalks.at(tau);
    auto it = std::lower_bound(cells.begin(), cells.end(), c);
    if (it == cells.end() || !(*it == c)) return -1;
    return static_cast<int>(it - cells.begin());
}

std::vector<Simplex> fiber_factors(const SimplicialMorphism& f, const Simplex& sigma) {
    std::vector<Simplex> out;
    for (VertexId y : f.image(sigma.vertices)) out.emplace_back(f.fiber_vertices(sigma.vertices, y));
    return out;
}

SheafCell pi_of(const SimplicialMorphism& f, const Simplex& sigma) {
    SheafCell c;
    c.factors.emplace_back(f.image(sigma.vertices));
    for (auto& s : fiber_factors(f, sigma)) c.factors.push_back(std::move(s));
    return c;
}

PrismalSheaf build_Sf(const SimplicialMorphism& f) {
    PrismalSheaf F;
    F.kind = SheafKind::Simplicial;
    F.base = f.target();
    F.projection = f.vertex_map();
    auto sources = f.source().all_simplices();
    for (const auto& tau : F.base.all_simplices()) {
        auto& cells = F.stalks[tau.vertices];
        for (const auto& s : sources)
            if (is_subset(f.image(s.vertices), tau.vertices)) cells.push_back(SheafCell{{s}});
        std::sort(cells.begin(), cells.end());
    }
    fill_specializations(F, [&](const VertexList& tp, const SheafCell& c) {
        VertexList r = f.restrict_over(c.factors[0].vertices, tp);
        if (r.empty()) return -1;
        return F.index_of(tp, SheafCell{{Simplex(r)}});
    });
    return F;
}

PrismalSheaf build_Pf(const SimplicialMorphism& f) {
    PrismalSheaf F;
    F.kind = SheafKind::Prismal;
    F.base = f.target();
    F.projection = f.vertex_map();
    auto sources = f.source().all_simplices();
    for (const auto& tau : F.base.all_simplices()) {
        auto& cells = F.stalks[tau.vertices];
        for (const auto& s : sources)
            if (f.image(s.vertices) == tau.vertices) cells.push_back(pi_of(f, s));
        std::sort(cells.begin(), cells.end());
    }
    fill_specializations(F, [&](const VertexList& tp, const SheafCell& c) {
        const VertexList& tau = c.factors[0].vertices;
        SheafCell img;
        img.factors.emplace_back(tp);
        for (std::size_t j = 0; j < tau.size(); ++j)
            if (std::binary_search(tp.begin(), tp.end(), tau[j])) img.factors.push_back(c.factors[j + 1]);
        return F.index_of(tp, img);
    });
    return F;
}

namespace {

void check_functorial(const PrismalSheaf& F, CheckResult& r) {
    for (const auto& [tau, cells] : F.stalks) {
        auto self = F.specialization.find({tau, tau});
        if (self == F.specialization.end()) {
            r.fail("missing h over " + Simplex(tau).to_string());
            continue;
        }
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (self->second[i] != static_cast<int>(i))
                r.fail("h_{tau,tau} moves " + cells[i].to_string());
        for (const auto& tp : faces_of(tau)) {
            const auto& h = F.specialization.at({tp, tau});
            // Surjectivity onto F(τ′).
            std::vector<bool> hit(F.stalks.at(tp).size(), false);
            for (int j : h)
                if (j >= 0) hit[static_cast<std::size_t>(j)] = true;
            for (std::size_t j = 0; j < hit.size(); ++j)
                if (!hit[j])
                    r.fail(fmt::format("h from {} to {} misses {}", Simplex(tau).to_string(), Simplex(tp).to_string(),
                                       F.stalks.at(tp)[j].to_string()));
            for (const auto& tpp : faces_of(tp)) {
                const auto& h2 = F.specialization.at({tpp, tp});
                const auto& h3 = F.specialization.at({tpp, tau});
                for (std::size_t i = 0; i < cells.size(); ++i) {
                    int two = h[i] < 0 ? -1 : h2[static_cast<std::size_t>(h[i])];
                    if (two != h3[i])
                        r.fail("specializations do not compose on " + cells[i].to_string() + " towards " +
                               Simplex(tpp).to_string());
                }
            }
        }
    }
}

}  // namespace

CheckResult check_Sf_characterization(const PrismalSheaf& F) {
    CheckResult r;
    for (const auto& [tau, cells] : F.stalks) {
        for (const auto& c : cells) {
            if (c.factors.size() != 1) {
                r.fail("cell " + c.to_string() + " is not a simplex");
                continue;
            }
            VertexList img;
            for (VertexId v : c.factors[0].vertices) {
                auto it = F.projection.find(v);
                if (it == F.projection.end()) {
                    r.fail(fmt::format("vertex {} has no projection", v));
                    continue;
                }
                img.push_back(it->second);
            }
            std::sort(img.begin(), img.end());
            img.erase(std::unique(img.begin(), img.end()), img.end());
            if (!is_subset(img, tau)) r.fail("cell " + c.to_string() + " does not lie over " + Simplex(tau).to_string());
        }
        if (!r.ok) return r;
        for (const auto& tp : faces_of(tau)) {
            const auto& h = F.specialization.at({tp, tau});
            for (std::size_t i = 0; i < cells.size(); ++i) {
                VertexList expect;
                for (VertexId v : cells[i].factors[0].vertices)
                    if (std::binary_search(tp.begin(), tp.end(), F.projection.at(v))) expect.push_back(v);
                std::sort(expect.begin(), expect.end());
                VertexList got;
                if (h[i] >= 0) got = F.stalks.at(tp)[static_cast<std::size_t>(h[i])].factors[0].sorted();
                if (got != expect)
                    r.fail("h sends " + cells[i].to_string() + " to " + Simplex(got).to_string() + " instead of " +
                           Simplex(expect).to_string());
            }
        }
    }
    if (r.ok) check_functorial(F, r);
    return r;
}

PfCheck check_Pf_characterization(const PrismalSheaf& F) {
    PfCheck r;
    for (const auto& [tau, cells] : F.stalks) {
        for (const auto& c : cells) {
            if (c.factors.size() != tau.size() + 1 || c.factors[0].sorted() != tau) {
                r.fail("cell " + c.to_string() + " is not of the form tau x s_0 x ... x s_s");
                continue;
            }
            std::set<VertexId> used;
            for (std::size_t j = 1; j < c.factors.size(); ++j) {
                if (c.factors[j].empty()) r.fail("cell " + c.to_string() + " has an empty fiber factor");
                for (VertexId v : c.factors[j].vertices)
                    if (!used.insert(v).second) r.fail("cell " + c.to_string() + " has overlapping factors");
            }
        }
        if (!r.ok) return r;
        for (const auto& tp : faces_of(tau)) {
            const auto& h = F.specialization.at({tp, tau});
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (h[i] < 0) {
                    r.fail("h sends " + cells[i].to_string() + " to nothing");
                    continue;
                }
                const auto& img = F.stalks.at(tp)[static_cast<std::size_t>(h[i])];
                bool ok = img.factors[0].sorted() == tp;
                for (std::size_t j = 1; j < img.factors.size() && ok; ++j)
                    ok = std::find(cells[i].factors.begin() + 1, cells[i].factors.end(), img.factors[j]) !=
                         cells[i].factors.end();
                if (!ok) r.fail("h sends " + cells[i].to_string() + " to " + img.to_string());
            }
        }
    }
    if (r.ok) check_functorial(F, r);
    if (!r.ok) return r;
    for (const auto& [tau, cells] : F.stalks) {
        auto& out = r.reconstructed[tau];
        for (const auto& tp : faces_of(tau)) {
            for (const auto& c : F.stalks.at(tp)) {
                std::vector<Simplex> parts(c.factors.begin() + 1, c.factors.end());
                out.insert(join(parts).sorted());
            }
        }
    }
    return r;
}

int relative_dim(const SheafCell& pi) {
    int d = 0;
    for (std::size_t j = 1; j < pi.factors.size(); ++j) d += pi.factors[j].dim();
    return d;
}

bool is_equidimensional(const SheafCell& pi, const VertexList& tau_prime) {
    const VertexList& tau = pi.factors.at(0).vertices;
    for (std::size_t j = 0; j < tau.size(); ++j)
        if (!std::binary_search(tau_prime.begin(), tau_prime.end(), tau[j]) && pi.factors[j + 1].dim() > 0)
            return false;
    return true;
}

FiberType fiber_structure(const PrismalSheaf& F, const VertexList& tau) {
    FiberType ft;
    ft.tau = Simplex(tau);
    std::vector<Prism> all;
    for (const auto& c : F.stalk(tau)) all.emplace_back(std::vector<Simplex>(c.factors.begin() + 1, c.factors.end()));
    for (const auto& p : all) {
        bool dominated = std::any_of(all.begin(), all.end(), [&](const Prism& q) {
            if (q == p) return false;
            for (std::size_t j = 0; j < p.factors.size(); ++j)
                if (!is_subset(p.factors[j].sorted(), q.factors[j].sorted())) return false;
            return true;
        });
        if (!dominated) ft.pieces.push_back(p);
    }
    return ft;
}

PrismPoint theta_sigma(const SimplicialMorphism& f, const Simplex& sigma, const std::map<VertexId, Rational>& lambda) {
    PrismPoint p;
    for (VertexId v : sigma.vertices) p.t[f(v)] += lambda.at(v);
    for (const auto& [y, t] : p.t)
        if (t == 0) throw StructureError(fmt::format("theta: t_{} vanishes, point is over the boundary", y));
    for (VertexId v : sigma.vertices) p.mu[{f(v), v}] = lambda.at(v) / p.t.at(f(v));
    return p;
}

std::map<VertexId, Rational> psi_sigma(const SimplicialMorphism& f, const Simplex& sigma, const PrismPoint& p) {
    std::map<VertexId, Rational> out;
    for (VertexId v : sigma.vertices) out[v] = p.t.at(f(v)) * p.mu.at({f(v), v});
    return out;
}

std::map<Var, Poly> psi_images(const SimplicialMorphism& f, const Simplex& sigma) {
    std::map<Var, Poly> out;
    for (VertexId v : sigma.vertices) {
        VertexId y = f(v);
        out.emplace(Var::lambda(v), Poly::var(Var::t(y)) * Poly::var(Var::mu(y, v)));
    }
    return out;
}

std::vector<Var> lambda_coords(const Simplex& s) {
    std::vector<Var> out;
    for (VertexId v : s.vertices) out.push_back(Var::lambda(v));
    return out;
}

std::vector<Var> t_coords(const Simplex& tau) {
    std::vector<Var> out;
    for (VertexId y : tau.vertices) out.push_back(Var::t(y));
    return out;
}

std::vector<Var> mu_coords(VertexId y, const Simplex& fiber) {
    std::vector<Var> out;
    for (VertexId v : fiber.vertices) out.push_back(Var::mu(y, v));
    return out;
}

CoordSystem simplex_context(const Simplex& s) { return CoordSystem{{lambda_coords(s)}}; }

CoordSystem fiber_context(const Simplex& tau, const std::vector<Simplex>& fibers) {
    CoordSystem cs;
    for (std::size_t j = 0; j < fibers.size(); ++j) cs.groups.push_back(mu_coords(tau.vertices.at(j), fibers[j]));
    return cs;
}

CoordSystem prism_context(const Simplex& tau, const std::vector<Simplex>& fibers) {
    CoordSystem cs = fiber_context(tau, fibers);
    cs.groups.insert(cs.groups.begin(), t_coords(tau));
    return cs;
}

}  // namespace prismal
