#include "prismal/verify.hpp"

#include "prismal/primitive.hpp"
#include "prismal/sheaf.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>

namespace prismal {

namespace {

std::vector<Var> lam(int p) {
    std::vector<Var> v;
    for (int i = 0; i <= p; ++i) v.push_back(Var::lambda(i));
    return v;
}

std::vector<Var> lam(const VertexList& vs) {
    std::vector<Var> v;
    for (VertexId i : vs) v.push_back(Var::lambda(i));
    return v;
}

VertexList iota_list(int p) {
    VertexList v(static_cast<std::size_t>(p + 1));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

std::vector<Var> mu_factor(int j, const VertexList& vs) {
    std::vector<Var> v;
    for (VertexId i : vs) v.push_back(Var::mu(j, i));
    return v;
}

CoordSystem product_context(const std::vector<int>& dims) {
    CoordSystem cs;
    for (std::size_t j = 0; j < dims.size(); ++j) cs.groups.push_back(mu_factor(static_cast<int>(j), iota_list(dims[j])));
    return cs;
}

Form prism_form(const Prism& p) {
    std::vector<std::vector<Var>> f;
    for (std::size_t j = 0; j < p.factors.size(); ++j) f.push_back(mu_factor(static_cast<int>(j), p.factors[j].vertices));
    return whitney_prism(f);
}

Prism standard_prism(const std::vector<int>& dims) {
    std::vector<Simplex> f;
    for (int d : dims) f.emplace_back(iota_list(d));
    return Prism(f);
}

std::string dims_string(const std::vector<int>& dims) {
    std::string s = "(";
    for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "," : "") + std::to_string(dims[i]);
    return s + ")";
}

IdentityReport report(std::string identity, std::string desc, const Form& residual) {
    IdentityReport r{std::move(identity), std::move(desc), residual.is_zero(), {}};
    if (!r.pass) r.residual = residual.to_string();
    return r;
}

/// K with a = K b, when a is a rational multiple of a nonzero b.
std::optional<Rational> proportionality(const Form& a, const Form& b) {
    if (b.is_zero()) return std::nullopt;
    const auto& [key, coeff] = *b.terms().begin();
    const auto& [mono, value] = *coeff.terms().begin();
    const Poly ca_poly = a.coefficient(key);
    const auto& ca = ca_poly.terms();
    auto it = ca.find(mono);
    if (it == ca.end()) return a.is_zero() ? std::optional<Rational>(Rational(0)) : std::nullopt;
    Rational k = it->second / value;
    k.canonicalize();
    if (!(a - Poly(k) * b).is_zero()) return std::nullopt;
    return k;
}

Poly sum_of(const std::vector<Var>& vs) {
    Poly s;
    for (Var v : vs) s += Poly::var(v);
    return s;
}

/// Both sides of ω(σ) u(1−u) = K ω′∧ω″∧du, canonical.
std::pair<Form, Form> faceface_sides(int p, int q) {
    const auto all = lam(p);
    CoordSystem cs{{all}};
    std::vector<Var> a(all.begin(), all.begin() + q + 1), b(all.begin() + q + 1, all.end());
    Poly u = sum_of(a);
    Form lhs = canonicalize((u * (Poly(1) - u)) * whitney(lam(p)), cs);
    Form rhs = canonicalize(wedge_all({whitney(a), whitney(b), Form::scalar(u).d()}), cs);
    return {lhs, rhs};
}

/// Graded sign of reordering items of the given degrees from their current
/// order into increasing target rank.
int graded_sign(std::vector<int> rank, const std::vector<int>& degree_by_rank) {
    int sign = 1;
    for (std::size_t i = 1; i < rank.size(); ++i)
        for (std::size_t j = i; j > 0 && rank[j] < rank[j - 1]; --j) {
            if ((degree_by_rank[rank[j]] * degree_by_rank[rank[j - 1]]) % 2) sign = -sign;
            std::swap(rank[j], rank[j - 1]);
        }
    return sign;
}

std::pair<Form, Form> facepro_sides(const std::vector<int>& dims, const std::vector<int>& qs) {
    CoordSystem cs = product_context(dims);
    Form lhs = prism_form(standard_prism(dims));
    std::vector<Form> w1, w2, xi;
    Poly den(1);
    for (std::size_t j = 0; j < dims.size(); ++j) {
        auto all = cs.groups[j];
        std::vector<Var> a(all.begin(), all.begin() + qs[j] + 1), b(all.begin() + qs[j] + 1, all.end());
        Poly u = sum_of(a);
        den *= u * (Poly(1) - u);
        w1.push_back(whitney(a));
        w2.push_back(whitney(b));
        xi.push_back(Form::scalar(u).d());
    }
    std::vector<Form> all = w1;
    all.insert(all.end(), w2.begin(), w2.end());
    all.insert(all.end(), xi.begin(), xi.end());
    return {canonicalize(den * lhs, cs), canonicalize(wedge_all(all), cs)};
}

template <class F>
void for_each_surjection(int n, int m, F&& fn) {
    std::vector<int> img(static_cast<std::size_t>(n), 0);
    while (true) {
        std::vector<bool> hit(static_cast<std::size_t>(m), false);
        for (int v : img) hit[static_cast<std::size_t>(v)] = true;
        if (std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) fn(img);
        int k = 0;
        while (k < n && ++img[static_cast<std::size_t>(k)] == m) img[static_cast<std::size_t>(k++)] = 0;
        if (k == n) return;
    }
}

std::vector<std::vector<int>> factor_shapes(int max_factors, int max_dim) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void()> rec = [&] {
        if (!cur.empty() && std::any_of(cur.begin(), cur.end(), [](int d) { return d > 0; })) out.push_back(cur);
        if (static_cast<int>(cur.size()) == max_factors) return;
        for (int d = 0; d <= max_dim; ++d) {
            cur.push_back(d);
            rec();
            cur.pop_back();
        }
    };
    rec();
    return out;
}

}  // namespace

Poly random_poly(const std::vector<Var>& vars, unsigned max_degree, std::mt19937_64& rng, int terms) {
    std::uniform_int_distribution<int> coeff(-5, 5), pick(0, static_cast<int>(vars.size()) - 1);
    std::uniform_int_distribution<unsigned> deg(0, max_degree);
    Poly out;
    for (int k = 0; k < terms; ++k) {
        Poly m(coeff(rng));
        const unsigned d = deg(rng);
        for (unsigned i = 0; i < d; ++i) m *= Poly::var(vars[static_cast<std::size_t>(pick(rng))]);
        out += m;
    }
    return out;
}

std::size_t form_rank(const std::vector<Form>& forms, const CoordSystem& cs) {
    std::map<std::pair<std::vector<Var>, Monomial>, std::size_t> index;
    std::vector<std::map<std::size_t, Rational>> rows;
    for (const auto& f : forms) {
        std::map<std::size_t, Rational> row;
        const Form canon = canonicalize(f, cs);
        for (const auto& [key, c] : canon.terms())
            for (const auto& [m, v] : c.terms()) {
                auto [it, inserted] = index.try_emplace({key, m}, index.size());
                row[it->second] = v;
            }
        rows.push_back(std::move(row));
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < index.size() && rank < rows.size(); ++col) {
        std::size_t pivot = rows.size();
        for (std::size_t r = rank; r < rows.size(); ++r)
            if (rows[r].count(col)) {
                pivot = r;
                break;
            }
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            auto it = rows[r].find(col);
            if (it == rows[r].end()) continue;
            Rational factor = it->second / rows[rank].at(col);
            for (const auto& [c, v] : rows[rank]) {
                Rational nv = rows[r][c] - factor * v;
                if (nv == 0)
                    rows[r].erase(c);
                else
                    rows[r][c] = nv;
            }
        }
        ++rank;
    }
    return rank;
}

bool all_pass(const std::vector<IdentityReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

IdentityReport verify_lemcod_simplex(int p, const VertexList& face) {
    Simplex s(iota_list(p));
    Form lhs = whitney(lam(face)).d();
    Form rhs = Poly(incidence_number(s, Simplex(face))) * whitney(lam(p));
    return report("lemcod.a", fmt::format("p={} face={}", p, Simplex(face).to_string()),
                  canonicalize(lhs - rhs, CoordSystem{{lam(p)}}));
}

IdentityReport verify_lemcod_prism(const std::vector<int>& dims, const Prism& face) {
    Prism p = standard_prism(dims);
    Form lhs = prism_form(face).d();
    Form rhs = Poly(prism_incidence(p, face)) * prism_form(p);
    return report("lemcod.b", fmt::format("dims={} face={}", dims_string(dims), face.to_string()),
                  canonicalize(lhs - rhs, product_context(dims)));
}

IdentityReport verify_lemcod_basis(const std::vector<int>& dims) {
    Prism p = standard_prism(dims);
    std::vector<Form> forms;
    for (const auto& f : prism_faces(p)) forms.push_back(prism_form(f));
    std::size_t rank = form_rank(forms, product_context(dims));
    IdentityReport r{"lemcod.c", fmt::format("dims={} faces={}", dims_string(dims), forms.size()), rank == forms.size(),
                     {}};
    if (!r.pass) r.residual = fmt::format("rank {}", rank);
    return r;
}

IdentityReport verify_bord(int p) {
    Form res = whitney_antiboundary(lam(p)).d() - whitney(lam(p));
    return report("bord", fmt::format("p={}", p), canonicalize(res, CoordSystem{{lam(p)}}));
}

IdentityReport verify_satrap(int p, int l) {
    const auto all = lam(p);
    std::vector<Var> g(all.begin(), all.begin() + l + 1);
    Form sum;
    for (int h = l + 1; h <= p; ++h) {
        auto phi = g;
        phi.push_back(Var::lambda(h));
        sum += whitney(phi);
    }
    Rational k = factorial(static_cast<unsigned>(l + 1)) * ((l + 1) % 2 ? -1 : 1);
    Form res = sum - Form::basis(g, Poly(k));
    return report("satrap", fmt::format("p={} l={}", p, l), canonicalize(res, CoordSystem{{lam(p)}}));
}

IdentityReport verify_satrapaz(int p, int l, const Poly& E) {
    const auto all = lam(p);
    std::vector<Var> g(all.begin(), all.begin() + l + 1);
    Form lhs = wedge(Form::scalar(E), whitney(g)).d();
    Form rhs;
    for (int h = l + 1; h <= p; ++h) {
        Poly rest(1);
        for (int i = 0; i <= p; ++i)
            if (i != h) rest -= Poly::var(Var::lambda(i));
        Poly Eh = E.substitute({{Var::lambda(h), rest}});
        Poly euler;
        for (int i = 0; i <= p; ++i)
            if (i != h) euler += Poly::var(Var::lambda(i)) * Eh.derivative(Var::lambda(i));
        auto phi = g;
        phi.push_back(Var::lambda(h));
        rhs += (Eh + euler * Rational(1, l + 1)) * whitney(phi);
    }
    if ((l + 1) % 2) rhs = -rhs;
    return report("satrapaz", fmt::format("p={} l={} E={}", p, l, E.to_string()),
                  canonicalize(lhs - rhs, CoordSystem{{all}}));
}

IdentityReport verify_iminve(const SimplicialMorphism& f, const Simplex& sigma) {
    PrismData P = make_prism(f, sigma);
    PullbackWeight w = pullback_weight(f, sigma);
    Form lhs = pullback(whitney(lambda_coords(sigma)), psi_images(f, sigma));
    std::vector<std::vector<Var>> factors{t_coords(P.tau)};
    for (std::size_t j = 0; j < P.fibers.size(); ++j) factors.push_back(mu_coords(P.tau.vertices[j], P.fibers[j]));
    Form rhs = (t_monomial(P.tau, P.fibers) * Rational(w.constant * w.sign)) * whitney_prism(factors);
    std::string map;
    for (VertexId v : sigma.vertices) map += fmt::format("{}>{} ", v, f(v));
    return report("iminve", fmt::format("sigma={} map={}", sigma.to_string(), map), canonicalize(lhs - rhs, P.context));
}

Rational faceface_constant(int p, int q) {
    auto [lhs, rhs] = faceface_sides(p, q);
    auto k = proportionality(lhs, rhs);
    if (!k) throw std::logic_error("faceface sides are not proportional");
    return *k;
}

IdentityReport verify_faceface_literal(int p, int q) {
    auto [lhs, rhs] = faceface_sides(p, q);
    Rational k = binomial(static_cast<unsigned>(p), static_cast<unsigned>(q)) / Rational(p - q) * (p % 2 ? -1 : 1);
    return report("faceface.literal", fmt::format("p={} q={}", p, q), lhs - Poly(k) * rhs);
}

IdentityReport verify_faceface(int p, int q) {
    auto [lhs, rhs] = faceface_sides(p, q);
    Rational k = binomial(static_cast<unsigned>(p), static_cast<unsigned>(q)) * (p - q) * ((p + q) % 2 ? -1 : 1);
    return report("faceface", fmt::format("p={} q={}", p, q), lhs - Poly(k) * rhs);
}

namespace {
std::pair<Form, Form> facepri_sides(int p) {
    const auto all = lam(p);
    CoordSystem cs{{all}};
    std::vector<Var> a(all.begin(), all.end() - 1);
    Var last = Var::lambda(p);
    Form lhs = canonicalize((Poly(1) - Poly::var(last)) * whitney(lam(p)), cs);
    Form rhs = canonicalize(wedge(whitney(a), Form::dvar(last)), cs);
    return {lhs, rhs};
}
}  // namespace

IdentityReport verify_facepri_literal(int p) {
    auto [lhs, rhs] = facepri_sides(p);
    return report("facepri.literal", fmt::format("p={}", p), lhs - Poly(Rational(p % 2 ? p : -p)) * rhs);
}

IdentityReport verify_facepri(int p) {
    auto [lhs, rhs] = facepri_sides(p);
    return report("facepri", fmt::format("p={}", p), lhs - Poly(p) * rhs);
}

IdentityReport verify_facepro_literal(const std::vector<int>& dims, const std::vector<int>& qs) {
    auto [lhs, rhs] = facepro_sides(dims, qs);
    int a = 0;
    for (std::size_t i = 1; i < dims.size(); ++i) {
        int prod = 1;
        for (std::size_t j = 0; j < i; ++j) prod *= dims[j] - qs[j] - 1;
        a += qs[i] * (prod + 1);
    }
    return report("facepro.literal", fmt::format("dims={} q={}", dims_string(dims), dims_string(qs)),
                  lhs - Poly(a % 2 ? -1 : 1) * rhs);
}

IdentityReport verify_facepro(const std::vector<int>& dims, const std::vector<int>& qs) {
    auto [lhs, rhs] = facepro_sides(dims, qs);
    const int n = static_cast<int>(dims.size());
    Rational k = 1;
    std::vector<int> rank, degree(static_cast<std::size_t>(3 * n));
    for (int j = 0; j < n; ++j) {
        const int p = dims[j], q = qs[j];
        k *= binomial(static_cast<unsigned>(p), static_cast<unsigned>(q)) * (p - q) * ((p + q) % 2 ? -1 : 1);
        const int ranks[3] = {j, n + j, 2 * n + j};
        const int degs[3] = {q, p - q - 1, 1};
        for (int t = 0; t < 3; ++t) {
            rank.push_back(ranks[t]);
            degree[static_cast<std::size_t>(ranks[t])] = degs[t];
        }
    }
    k *= graded_sign(rank, degree);
    return report("facepro", fmt::format("dims={} q={}", dims_string(dims), dims_string(qs)), lhs - Poly(k) * rhs);
}

std::vector<IdentityReport> suite_lemcod(const Universe& u) {
    std::vector<IdentityReport> out;
    for (int p = 1; p <= u.max_simplex_dim; ++p)
        for (const auto& f : faces(Simplex(iota_list(p)), p - 1)) {
            out.push_back(verify_lemcod_simplex(p, f.vertices));
            if (f.vertices.size() >= 2) {
                VertexList flipped = f.vertices;
                std::swap(flipped[0], flipped[1]);
                out.push_back(verify_lemcod_simplex(p, flipped));
            }
        }
    for (const auto& dims : factor_shapes(u.max_prism_factors, u.max_factor_dim))
        for (const auto& face : prism_faces(standard_prism(dims))) out.push_back(verify_lemcod_prism(dims, face));
    return out;
}

std::vector<IdentityReport> suite_lemcod_basis(const Universe& u) {
    std::vector<IdentityReport> out;
    for (int p = 1; p <= u.max_simplex_dim; ++p) out.push_back(verify_lemcod_basis({p}));
    for (const auto& dims : factor_shapes(u.max_prism_factors, u.max_factor_dim))
        if (dims.size() > 1) out.push_back(verify_lemcod_basis(dims));
    return out;
}

std::vector<IdentityReport> suite_bord(const Universe& u) {
    std::vector<IdentityReport> out;
    for (int p = 1; p <= u.max_simplex_dim; ++p) out.push_back(verify_bord(p));
    return out;
}

std::vector<IdentityReport> suite_satrap(const Universe& u) {
    std::vector<IdentityReport> out;
    std::mt19937_64 rng(u.seed);
    for (int p = 1; p <= u.max_simplex_dim; ++p)
        for (int l = 0; l < p && l <= 2; ++l) {
            out.push_back(verify_satrap(p, l));
            out.push_back(verify_satrapaz(p, l, Poly(1)));
            out.push_back(verify_satrapaz(p, l, Poly::var(Var::lambda(0))));
        }
    // Random E on the largest (p, l) pairs.
    for (int k = 0; k < u.random_samples; ++k) {
        const int p = 2 + k % (std::max(1, u.max_simplex_dim - 1));
        const int l = std::min(2, k % p);
        out.push_back(verify_satrapaz(p, l, random_poly(lam(p), 3, rng)));
    }
    return out;
}

std::vector<IdentityReport> suite_iminve(const Universe& u) {
    std::vector<IdentityReport> out;
    for (int s = 0; s <= u.max_base_dim; ++s)
        for (int p = s; p <= u.max_simplex_dim; ++p)
            for_each_surjection(p + 1, s + 1, [&](const std::vector<int>& img) {
                VertexList sv = iota_list(p), tv;
                for (int y = 0; y <= s; ++y) tv.push_back(100 + y);
                std::map<VertexId, VertexId> m;
                for (int v = 0; v <= p; ++v) m[v] = 100 + img[static_cast<std::size_t>(v)];
                SimplicialMorphism f(SimplicialComplex(sv, {sv}), SimplicialComplex(tv, {tv}), m);
                out.push_back(verify_iminve(f, Simplex(sv)));
            });
    return out;
}

std::vector<IdentityReport> suite_faceface_literal(const Universe& u) {
    std::vector<IdentityReport> out;
    for (int p = 1; p <= u.max_simplex_dim; ++p)
        for (int q = 0; q < p; ++q) out.push_back(verify_faceface_literal(p, q));
    for (int p = 1; p <= u.max_simplex_dim; ++p) out.push_back(verify_facepri_literal(p));
    for (int a = 1; a <= u.max_factor_dim; ++a)
        for (int b = 1; b <= u.max_factor_dim; ++b)
            for (int qa = 0; qa < a; ++qa)
                for (int qb = 0; qb < b; ++qb) out.push_back(verify_facepro_literal({a, b}, {qa, qb}));
    return out;
}

std::vector<IdentityReport> suite_faceface(const Universe& u) {
    std::vector<IdentityReport> out;
    for (int p = 1; p <= u.max_simplex_dim; ++p)
        for (int q = 0; q < p; ++q) out.push_back(verify_faceface(p, q));
    for (int p = 1; p <= u.max_simplex_dim; ++p) out.push_back(verify_facepri(p));
    for (int a = 1; a <= u.max_factor_dim; ++a)
        for (int b = 1; b <= u.max_factor_dim; ++b)
            for (int qa = 0; qa < a; ++qa)
                for (int qb = 0; qb < b; ++qb) out.push_back(verify_facepro({a, b}, {qa, qb}));
    out.push_back(verify_facepro({1, 1, 1}, {0, 0, 0}));
    out.push_back(verify_facepro({2, 1, 2}, {1, 0, 0}));
    return out;
}

namespace {

/// Prisms of P_f as the simplices σ with f(σ) = τ.
std::vector<Simplex> prism_simplices(const SimplicialMorphism& f) { return f.source().all_simplices(); }

CoordSystem face_context(const PrismData& P, const Simplex& tp) {
    std::vector<Simplex> sub;
    for (std::size_t j = 0; j < P.fibers.size(); ++j)
        if (tp.contains(P.tau.vertices[j])) sub.push_back(P.fibers[j]);
    CoordSystem cs = prism_context(tp, sub);
    for (std::size_t j = 0; j < P.fibers.size(); ++j)
        if (!tp.contains(P.tau.vertices[j])) cs.groups.push_back(mu_coords(P.tau.vertices[j], P.fibers[j]));
    return cs;
}

}  // namespace

std::vector<IdentityReport> suite_opicsg(const std::vector<NamedMorphism>& fixtures) {
    std::vector<IdentityReport> out;
    for (const auto& [name, f] : fixtures)
        for (const auto& sigma : prism_simplices(f)) {
            PrismData P = make_prism(f, sigma);
            Poly integral = integrate_top(relative_whitney(P.tau, P.fibers), P.fiber_context, true);
            IdentityReport r{"opicsg", name + " " + sigma.to_string(), integral == Poly(1), {}};
            if (!r.pass) r.residual = integral.to_string();
            out.push_back(r);
        }
    return out;
}

std::vector<IdentityReport> suite_relative(const std::vector<NamedMorphism>& fixtures) {
    std::vector<IdentityReport> out;
    for (const auto& [name, f] : fixtures) {
        for (const auto& sigma : prism_simplices(f)) {
            PrismData P = make_prism(f, sigma);
            const int r = P.relative_dim();
            const std::string desc = name + " " + sigma.to_string();
            Form rel = relative_whitney(P.tau, P.fibers);

            // OPICSF: vertical, of degree r, d_e-closed.
            Form closed = canonicalize(relative_d(rel, P), P.context);
            bool vertical = rel.is_homogeneous(r) && drop_differentials(rel, P.t_vars()) == rel;
            out.push_back(vertical ? report("opicsf", desc, closed)
                                   : IdentityReport{"opicsf", desc, false, "not vertical of degree r"});

            // OPICSH: t-weighted form over every proper face τ′.
            Form weighted = t_monomial(P.tau, P.fibers) * rel;
            for (int k = 0; k < P.tau.dim(); ++k)
                for (const auto& tp : faces(P.tau, k)) {
                    std::set<Var> gone;
                    std::vector<Simplex> sub;
                    bool equidim = true;
                    for (std::size_t j = 0; j < P.fibers.size(); ++j) {
                        if (tp.contains(P.tau.vertices[j]))
                            sub.push_back(P.fibers[j]);
                        else {
                            gone.insert(Var::t(P.tau.vertices[j]));
                            if (P.fibers[j].size_exp() > 0) equidim = false;
                        }
                    }
                    Form expected = equidim ? t_monomial(tp, sub) * relative_whitney(tp, sub) : Form();
                    Form res = canonicalize(restrict_zero(weighted, gone) - expected, face_context(P, tp));
                    SheafCell cell = pi_of(f, sigma);
                    if (is_equidimensional(cell, tp.vertices) != equidim)
                        out.push_back({"opicsh", desc + " over " + tp.to_string(), false, "equidimensionality mismatch"});
                    else
                        out.push_back(report("opicsh", desc + " over " + tp.to_string(), res));
                }

            // LEMROL, same base: one fiber factor replaced by a codim-1 face.
            int prefix = 0;
            for (std::size_t j = 0; j < P.fibers.size(); ++j) {
                const int q = P.fibers[j].size_exp();
                if (q >= 1)
                    for (const auto& face : faces(P.fibers[j], q - 1)) {
                        auto parts = P.fibers;
                        parts[j] = face;
                        const int inc = (prefix % 2 ? -1 : 1) * incidence_number(P.fibers[j], face);
                        Form res = relative_d(relative_whitney(P.tau, parts), P) - Poly(inc) * rel;
                        out.push_back(report("lemrol.1", desc + " face " + face.to_string(), canonicalize(res, P.context)));
                    }
                prefix += q;
            }
            // LEMROL, codim-1 base face over which σ_j is a point.
            for (std::size_t j = 0; j < P.fibers.size() && P.tau.dim() >= 1; ++j) {
                if (P.fibers[j].size_exp() != 0) continue;
                Simplex tp;
                std::vector<Simplex> sub;
                for (std::size_t k = 0; k < P.fibers.size(); ++k)
                    if (k != j) {
                        tp.vertices.push_back(P.tau.vertices[k]);
                        sub.push_back(P.fibers[k]);
                    }
                Form ext = relative_whitney(tp, sub);
                Form same = canonicalize(ext - rel, P.context);
                Form de = canonicalize(relative_d(ext, P), P.context);
                out.push_back(report("lemrol.2", desc + " over " + tp.to_string(), same + de));
            }

            // LECARE: de ∧ (anything) is fiberwise zero, ω(π/τ) is not when r > 0.
            Form de = whitney(t_coords(P.tau));
            bool ok = is_fiberwise_zero(wedge(de, Form::dvar(Var::t(P.tau.vertices[0]))), P) &&
                      (P.tau.dim() == 0 || is_fiberwise_zero(Form::dvar(Var::t(P.tau.vertices[0])), P)) &&
                      (r == 0 || !is_fiberwise_zero(rel, P));
            out.push_back({"lecare", desc, ok, ok ? "" : "fiberwise-zero criterion disagrees"});
        }
    }
    return out;
}

std::vector<IdentityReport> suite_structure(const std::vector<NamedMorphism>& fixtures, const Universe& u) {
    std::vector<IdentityReport> out;
    for (const auto& [name, f] : fixtures) {
        CheckResult s = check_Sf_characterization(build_Sf(f));
        out.push_back({"procar", name, s.ok, s.witness});
        PfCheck p = check_Pf_characterization(build_Pf(f));
        out.push_back({"proppf", name, p.ok, p.witness});
    }
    for (int p = 1; p <= u.max_simplex_dim + 1; ++p) {
        auto dd = boundary_of_chain(boundary_chain(Simplex(iota_list(p))));
        out.push_back({"boundary^2", fmt::format("simplex p={}", p), dd.empty(), dd.empty() ? "" : "nonzero chain"});
    }
    for (const auto& dims : factor_shapes(u.max_prism_factors, u.max_factor_dim)) {
        auto dd = boundary_of_chain(prism_boundary(standard_prism(dims)));
        out.push_back({"boundary^2", "prism " + dims_string(dims), dd.empty(), dd.empty() ? "" : "nonzero chain"});
    }
    return out;
}

std::vector<IdentityReport> suite_ode(const Universe& u, int samples) {
    std::vector<IdentityReport> out;
    std::mt19937_64 rng(u.seed + 1);
    for (int k = 0; k < samples; ++k) {
        const int nvars = 1 + k % 6;
        const unsigned r = 1 + static_cast<unsigned>(k % 4);
        std::vector<Var> vars;
        for (int i = 0; i < nvars; ++i) vars.push_back(Var::u(i));
        Poly B = random_poly(vars, 5, rng, 8);
        std::set<Var> vs(vars.begin(), vars.end());
        Poly E = ode_solve(B, vs, r);
        Poly euler;
        for (Var v : vars) euler += Poly::var(v) * E.derivative(v);
        Poly res = E + euler * Rational(1, r) - B;
        out.push_back({"integration", fmt::format("sample {} r={} vars={}", k, r, nvars), res.is_zero(), res.to_string()});
    }
    Poly zero = ode_solve(Poly(), {Var::u(0)}, 1);
    out.push_back({"integration", "B = 0", zero.is_zero(), zero.to_string()});
    return out;
}

std::vector<IdentityReport> suite_calculus(const Universe& u) {
    std::vector<IdentityReport> out;
    std::mt19937_64 rng(u.seed + 2);
    std::vector<Var> vars;
    for (int i = 0; i < 6; ++i) vars.push_back(Var::lambda(i));
    for (int k = 0; k < u.random_samples; ++k) {
        Form a;
        for (int t = 0; t < 3; ++t) {
            std::vector<Var> key{vars[static_cast<std::size_t>((k + t) % 6)], vars[static_cast<std::size_t>((k + 2 * t + 1) % 6)]};
            if (key[0] == key[1]) key.pop_back();
            a += Form::basis(key, random_poly(vars, 3, rng));
        }
        out.push_back(report("d^2", fmt::format("sample {}", k), a.d().d()));
        std::map<Var, Poly> images;
        for (Var v : vars) images[v] = random_poly({Var::u(0), Var::u(1), Var::u(2)}, 2, rng, 3);
        out.push_back(report("pullback.d", fmt::format("sample {}", k), pullback(a.d(), images) - pullback(a, images).d()));
    }
    for (int p = 0; p <= u.max_simplex_dim + 1; ++p) {
        Poly v = integrate_top(whitney(lam(p)), CoordSystem{{lam(p)}});
        out.push_back({"integral", fmt::format("omega(sigma) p={}", p), v == Poly(1), v.to_string()});
    }
    return out;
}

}  // namespace prismal
