#include "prismal/primitive.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace prismal {

namespace {

template <class T>
T determinant(std::vector<std::vector<T>> m) {
    const std::size_t n = m.size();
    if (n == 0) return T(1);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    T total(0);
    do {
        int inversions = 0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (perm[a] > perm[b]) ++inversions;
        T prod(1);
        for (std::size_t a = 0; a < n && prod != T(0); ++a) prod *= m[a][perm[a]];
        total += inversions % 2 ? T(-prod) : prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

PullbackWeight weight_from_parts(const Simplex& cell, const std::vector<Simplex>& parts) {
    const int s = static_cast<int>(parts.size()) - 1;
    PullbackWeight w;
    int alpha = 0;
    VertexList grouped;
    w.constant = factorial(static_cast<unsigned>(cell.dim())) / factorial(static_cast<unsigned>(s));
    for (int j = 0; j <= s; ++j) {
        const int sz = parts[j].size_exp();
        alpha += (s - j) * sz;
        w.constant /= factorial(static_cast<unsigned>(sz));
        grouped.insert(grouped.end(), parts[j].vertices.begin(), parts[j].vertices.end());
    }
    w.constant.canonicalize();
    w.sign = (alpha % 2 ? -1 : 1) * permutation_sign(cell.vertices, grouped);
    return w;
}

Poly divide_by_monomial(const Poly& p, const Poly& m) {
    if (m.terms().size() != 1) throw std::logic_error("divide_by_monomial: not a monomial");
    const auto& [mono, c] = *m.terms().begin();
    Poly out;
    for (const auto& [tm, tc] : p.terms()) {
        std::map<Var, int> e;
        for (const auto& [v, k] : tm) e[v] += static_cast<int>(k);
        for (const auto& [v, k] : mono) e[v] -= static_cast<int>(k);
        Monomial q;
        for (const auto& [v, k] : e) {
            if (k < 0) throw std::domain_error("coefficient not divisible by " + m.to_string());
            if (k > 0) q.emplace_back(v, static_cast<unsigned>(k));
        }
        out.add_term(q, tc / c);
    }
    return out;
}

/// Rational value of a form on r vectors given in μ coordinates.
Poly evaluate_on(const Form& a, const std::vector<std::map<Var, Rational>>& vectors) {
    Poly out;
    for (const auto& [key, coeff] : a.terms()) {
        if (key.size() != vectors.size()) continue;
        std::vector<std::vector<Rational>> m(key.size(), std::vector<Rational>(key.size()));
        for (std::size_t i = 0; i < key.size(); ++i)
            for (std::size_t b = 0; b < vectors.size(); ++b) {
                auto it = vectors[b].find(key[i]);
                m[i][b] = it == vectors[b].end() ? Rational(0) : it->second;
            }
        Rational det = determinant(m);
        if (det != 0) out += coeff * det;
    }
    return out;
}

Simplex phi_in_sigma_order(const Simplex& sigma, const std::vector<Simplex>& parts) {
    std::set<VertexId> in;
    for (const auto& p : parts) in.insert(p.vertices.begin(), p.vertices.end());
    VertexList v;
    for (VertexId x : sigma.vertices)
        if (in.count(x)) v.push_back(x);
    return Simplex(v);
}

std::set<Var> lambda_outside(const Form& a, const Simplex& sigma) {
    std::set<Var> out;
    for (Var v : a.variables())
        if (v.kind() == VarKind::Lambda && !sigma.contains(v.vertex())) out.insert(v);
    return out;
}

std::vector<std::vector<Var>> first_free_groups(const CoordSystem& cs) {
    std::vector<std::vector<Var>> out;
    for (const auto& g : cs.groups) out.emplace_back(g.begin() + 1, g.end());
    return out;
}

/// Fiber cone operator at the product of the first vertices.
Form fiber_cone(const Form& closed, const PrismData& prism) {
    Form a = canonicalize(closed, prism.fiber_context, Eliminate::First);
    std::set<Var> vars;
    for (const auto& g : first_free_groups(prism.fiber_context)) vars.insert(g.begin(), g.end());
    return cone_primitive(a, vars);
}

}  // namespace

int PrismData::relative_dim() const {
    int r = 0;
    for (const auto& fbr : fibers) r += fbr.size_exp();
    return r;
}

std::set<Var> PrismData::t_vars() const {
    auto v = t_coords(tau);
    return {v.begin(), v.end()};
}

PrismData make_prism(const SimplicialMorphism& f, const Simplex& sigma) {
    PrismData p;
    p.sigma = sigma;
    p.tau = Simplex(f.image(sigma.vertices));
    p.fibers = fiber_factors(f, sigma);
    p.context = prism_context(p.tau, p.fibers);
    p.fiber_context = fiber_context(p.tau, p.fibers);
    return p;
}

PullbackWeight pullback_weight(const SimplicialMorphism& f, const Simplex& sigma) {
    return weight_from_parts(sigma, fiber_factors(f, sigma));
}

Poly t_monomial(const Simplex& tau, const std::vector<Simplex>& parts) {
    Poly m(1);
    for (std::size_t j = 0; j < parts.size(); ++j)
        if (parts[j].size_exp() > 0) m *= Poly::var(Var::t(tau.vertices[j]), static_cast<unsigned>(parts[j].size_exp()));
    return m;
}

Form relative_whitney(const Simplex& tau, const std::vector<Simplex>& parts) {
    std::vector<std::vector<Var>> factors;
    for (std::size_t j = 0; j < parts.size(); ++j) factors.push_back(mu_coords(tau.vertices[j], parts[j]));
    return whitney_prism(factors);
}

Form vertical_part(const Form& a, const PrismData& prism) {
    return drop_differentials(canonicalize(a, prism.fiber_context), prism.t_vars());
}

Form relative_d(const Form& a, const PrismData& prism) { return vertical_part(a.d(), prism); }

bool is_fiberwise_zero(const Form& a, const PrismData& prism) {
    return canonicalize(wedge(a, whitney(t_coords(prism.tau))), prism.context).is_zero();
}

std::vector<std::vector<Simplex>> relative_faces(const PrismData& prism, int r) {
    std::vector<std::vector<Simplex>> out;
    std::vector<Simplex> current;
    std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
        if (j == prism.fibers.size()) {
            if (left == 0) out.push_back(current);
            return;
        }
        const auto& vs = prism.fibers[j].vertices;
        const int n = static_cast<int>(vs.size());
        for (int k = 0; k <= std::min(left, n - 1); ++k)
            for (const auto& face : faces(prism.fibers[j], k)) {
                current.push_back(face);
                rec(j + 1, left - k);
                current.pop_back();
            }
    };
    rec(0, r);
    return out;
}

FiberwiseDecomposition decompose_vertical(const Form& vertical, const PrismData& prism, int r) {
    FiberwiseDecomposition d;
    d.prism = prism;
    d.r = r;
    d.vertical = vertical_part(vertical, prism);
    if (!d.vertical.is_zero() && !d.vertical.is_homogeneous(r))
        throw std::domain_error(fmt::format("fiberwise degree of the form is not {} on {}", r, prism.sigma.to_string()));
    for (auto& parts : relative_faces(prism, r)) {
        std::vector<std::map<Var, Rational>> frame;
        Rational norm = 1;
        for (std::size_t j = 0; j < parts.size(); ++j) {
            const VertexId y = prism.tau.vertices[j];
            const VertexId last = prism.fibers[j].vertices.back();
            const auto& vs = parts[j].vertices;
            norm *= factorial(static_cast<unsigned>(vs.size() - 1));
            for (std::size_t a = 1; a < vs.size(); ++a) {
                std::map<Var, Rational> vec;
                if (vs[a] != last) vec[Var::mu(y, vs[a])] += 1;
                if (vs[0] != last) vec[Var::mu(y, vs[0])] -= 1;
                frame.push_back(vec);
            }
        }
        FaceCoefficient fc;
        fc.parts = parts;
        fc.phi = phi_in_sigma_order(prism.sigma, parts);
        fc.weight = weight_from_parts(fc.phi, parts);
        Poly c = evaluate_on(d.vertical, frame) * Rational(1 / norm);
        fc.A = divide_by_monomial(c, t_monomial(prism.tau, parts));
        d.faces.push_back(std::move(fc));
    }
    return d;
}

FiberwiseDecomposition extract_A(const Form& eta, const SimplicialMorphism& f, const Simplex& sigma, int r) {
    PrismData prism = make_prism(f, sigma);
    Form restricted = restrict_zero(eta, lambda_outside(eta, sigma));
    return decompose_vertical(pullback(restricted, psi_images(f, sigma)), prism, r);
}

Form lemetb_residual(const FiberwiseDecomposition& d) {
    Form sum;
    for (const auto& fc : d.faces)
        sum += (t_monomial(d.prism.tau, fc.parts) * fc.A) * relative_whitney(d.prism.tau, fc.parts);
    return canonicalize(vertical_part(d.vertical - sum, d.prism), d.prism.context);
}

Rational a_tilde_at(const FiberwiseDecomposition& d, std::size_t face, const std::map<VertexId, Rational>& x) {
    const auto& fc = d.faces.at(face);
    std::map<Var, Rational> point;
    for (std::size_t j = 0; j < d.prism.fibers.size(); ++j) {
        const VertexId y = d.prism.tau.vertices[j];
        Rational t = 0;
        for (VertexId v : d.prism.fibers[j].vertices) t += x.at(v);
        if (t == 0) throw StructureError("a_tilde_at: point lies over a face of the base simplex");
        point[Var::t(y)] = t;
        for (VertexId v : d.prism.fibers[j].vertices) point[Var::mu(y, v)] = x.at(v) / t;
    }
    Rational a = fc.A.evaluate(point) * fc.weight.sign / fc.weight.constant;
    a.canonicalize();
    return a;
}

double a_tilde_estimate(const Form& eta, const SimplicialMorphism& f, const Simplex& sigma,
                        const std::vector<Simplex>& parts, const std::map<VertexId, Rational>& x, double eps) {
    using Rule = boost::math::quadrature::gauss<double, 10>;
    std::vector<double> nodes, weights;  // on [0,1]
    for (std::size_t i = 0; i < Rule::abscissa().size(); ++i) {
        const double a = Rule::abscissa()[i], w = Rule::weights()[i];
        nodes.push_back(0.5 * (1 + a));
        weights.push_back(0.5 * w);
        if (a != 0) {
            nodes.push_back(0.5 * (1 - a));
            weights.push_back(0.5 * w);
        }
    }

    const Simplex tau(f.image(sigma.vertices));
    std::map<VertexId, double> t;
    for (VertexId v : sigma.vertices) t[f(v)] += x.at(v).get_d();

    // Tangent vectors ε t_j (e_v − e_{v0}) in λ space, one per free vertex.
    std::vector<std::pair<std::size_t, VertexId>> free;  // (group, vertex)
    std::vector<std::map<Var, double>> tangents;
    for (std::size_t j = 0; j < parts.size(); ++j) {
        const double tj = t.at(tau.vertices[j]);
        for (std::size_t a = 1; a < parts[j].vertices.size(); ++a) {
            free.emplace_back(j, parts[j].vertices[a]);
            tangents.push_back({{Var::lambda(parts[j].vertices[a]), eps * tj},
                                {Var::lambda(parts[j].vertices[0]), -eps * tj}});
        }
    }
    const std::size_t r = tangents.size();

    Form restricted = restrict_zero(eta, lambda_outside(eta, sigma));
    std::vector<std::pair<Poly, double>> pieces;
    for (const auto& [key, coeff] : restricted.terms()) {
        if (key.size() != r) continue;
        std::vector<std::vector<double>> m(r, std::vector<double>(r));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t b = 0; b < r; ++b) {
                auto it = tangents[b].find(key[i]);
                m[i][b] = it == tangents[b].end() ? 0.0 : it->second;
            }
        double det = determinant(m);
        if (det != 0) pieces.emplace_back(coeff, det);
    }

    // Collapsed coordinates per group.
    std::vector<std::size_t> idx(r, 0);
    double integral = 0;
    const std::size_t q = nodes.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < r; ++i) total *= q;
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rest = flat;
        for (std::size_t i = 0; i < r; ++i) {
            idx[i] = rest % q;
            rest /= q;
        }
        double weight = 1;
        std::map<VertexId, double> lam;
        std::size_t pos = 0;
        for (std::size_t j = 0; j < parts.size(); ++j) {
            const double tj = t.at(tau.vertices[j]);
            const auto& vs = parts[j].vertices;
            double remaining = 1, used = 0;
            for (std::size_t a = 1; a < vs.size(); ++a, ++pos) {
                const double u = nodes[idx[pos]];
                const double w = remaining * u;
                weight *= weights[idx[pos]];
                if (a + 1 < vs.size()) weight *= std::pow(1 - u, static_cast<double>(vs.size() - 1 - a));
                remaining *= 1 - u;
                used += w;
                lam[vs[a]] += tj * w;
            }
            lam[vs[0]] += tj * (1 - used);
        }
        std::map<Var, double> z;
        for (VertexId v : sigma.vertices) {
            const double xv = x.at(v).get_d();
            const double yv = lam.count(v) ? lam[v] : 0.0;
            z[Var::lambda(v)] = xv + eps * (yv - xv);
        }
        double value = 0;
        for (const auto& [coeff, det] : pieces) value += coeff.evaluate_double(z) * det;
        integral += weight * value;
    }

    Simplex phi = phi_in_sigma_order(sigma, parts);
    PullbackWeight w = weight_from_parts(phi, parts);
    double scale = std::pow(eps, static_cast<double>(r)) * w.constant.get_d();
    for (std::size_t j = 0; j < parts.size(); ++j)
        scale *= std::pow(t.at(tau.vertices[j]), static_cast<double>(parts[j].size_exp()));
    return w.sign * integral / scale;
}

std::vector<OracleSample> oracle_samples(const Form& eta, const SimplicialMorphism& f, int r, double eps) {
    std::vector<OracleSample> out;
    for (const auto& sigma : f.source().simplices(f.source().dim())) {
        if (make_prism(f, sigma).relative_dim() < r) continue;
        auto d = extract_A(eta, f, sigma, r);
        std::map<VertexId, Rational> x;
        const int n = static_cast<int>(sigma.vertices.size());
        for (int i = 0; i < n; ++i) {
            Rational w(2 * (i + 1), n * (n + 1));
            w.canonicalize();
            x[sigma.vertices[i]] = w;
        }
        for (std::size_t k = 0; k < d.faces.size(); ++k) {
            OracleSample s{sigma.vertices, d.faces[k].phi.vertices};
            s.exact = a_tilde_at(d, k, x).get_d();
            s.estimate = a_tilde_estimate(eta, f, sigma, d.faces[k].parts, x, eps);
            s.extrapolated = 2 * a_tilde_estimate(eta, f, sigma, d.faces[k].parts, x, eps / 2) - s.estimate;
            out.push_back(std::move(s));
        }
    }
    return out;
}

CPart assemble_C(const FiberwiseDecomposition& d) {
    if (d.r < 1) throw StructureError("assemble_C: relative degree must be at least 1");
    CPart c;
    c.r = d.r;
    for (const auto& fc : d.faces) {
        int prefix = 0;
        bool any = false;
        for (std::size_t j = 0; j < fc.parts.size(); ++j) {
            const auto& part = fc.parts[j];
            const int qj = part.size_exp();
            if (qj >= 1) {
                any = true;
                const VertexId y = d.prism.tau.vertices[j];
                const Simplex& fiber = d.prism.fibers[j];
                for (VertexId x : part.vertices) {
                    CEntry e;
                    e.phi = fc.phi;
                    e.phi_parts = fc.parts;
                    e.gamma_parts = fc.parts;
                    VertexList g;
                    for (VertexId v : part.vertices)
                        if (v != x) g.push_back(v);
                    e.gamma_parts[j] = Simplex(g);
                    e.j = j;
                    e.dropped = x;
                    e.n = qj + 1;
                    e.incidence = (prefix % 2 ? -1 : 1) * incidence_number(part, e.gamma_parts[j]);

                    Poly rest(1);
                    for (VertexId v : fiber.vertices)
                        if (v != x) rest -= Poly::var(Var::mu(y, v));
                    e.A_gamma = fc.A.substitute({{Var::mu(y, x), rest}});
                    for (VertexId v : g) e.ode_vars.insert(Var::mu(y, v));
                    e.C_tilde = ode_solve(e.A_gamma, e.ode_vars, static_cast<unsigned>(d.r)) * Rational(1, e.n);
                    e.C = Poly::var(Var::t(y)) * e.C_tilde;
                    c.entries.push_back(std::move(e));
                }
            }
            prefix += qj;
        }
        if (!any) throw StructureError("n(phi/tau) = 0 for " + fc.phi.to_string());
    }
    return c;
}

Poly scalar_equation_residual(const CEntry& e, int r) {
    Poly euler;
    for (Var v : e.ode_vars) euler += Poly::var(v) * e.C_tilde.derivative(v);
    return e.C_tilde + euler * Rational(1, r) - e.A_gamma * Rational(1, e.n);
}

Form c_part_form(const CPart& c, const PrismData& prism, bool signed_terms) {
    Form out;
    for (const auto& e : c.entries) {
        Poly coeff = t_monomial(prism.tau, e.phi_parts) * e.C_tilde;
        if (signed_terms && e.incidence < 0) coeff = -coeff;
        out += coeff * relative_whitney(prism.tau, e.gamma_parts);
    }
    return out;
}

CPart solve_vertical_gluing(const Form& q, const PrismData& prism, int r) {
    Form closure = canonicalize(relative_d(q, prism), prism.context);
    if (!closure.is_zero()) throw ExactnessError("vertical gluing input is not fiberwise closed", closure);
    if (r < 2) return CPart{r - 1, {}};
    return assemble_C(decompose_vertical(q, prism, r - 1));
}

Var inverse_t(VertexId y) { return Var::u(y); }

bool PrimitiveResult::residuals_zero() const {
    return std::all_of(prisms.begin(), prisms.end(), [](const auto& p) { return p.theodg_residual.is_zero(); });
}

bool PrimitiveResult::horizontal_ok() const {
    return std::all_of(horizontal.begin(), horizontal.end(), [](const auto& h) { return h.ok; });
}

std::size_t PrimitiveResult::corrected_prisms() const {
    return static_cast<std::size_t>(
        std::count_if(prisms.begin(), prisms.end(), [](const auto& p) { return !p.correction.is_zero(); }));
}

namespace {

PrismPrimitive build_prism_primitive(const SimplicialMorphism& f, const Form& omega, const Simplex& sigma, int r) {
    PrismPrimitive out;
    out.prism = make_prism(f, sigma);
    const PrismData& P = out.prism;
    Form restricted = restrict_zero(omega, lambda_outside(omega, sigma));
    Form pulled = pullback(restricted, psi_images(f, sigma));
    Form beta = vertical_part(pulled, P);

    Form closure = canonicalize(relative_d(beta, P), P.context);
    if (!closure.is_zero())
        throw ExactnessError("form is not fiberwise closed on " + P.sigma.to_string(), closure);

    out.decomposition = decompose_vertical(beta, P, r);
    out.C = assemble_C(out.decomposition);
    out.H_C = c_part_form(out.C, P, true);
    Form literal = c_part_form(out.C, P, false);
    out.literal_residual = canonicalize(beta - relative_d(literal, P), P.context);
    out.c_residual = canonicalize(beta - relative_d(out.H_C, P), P.context);

    Form H = out.H_C;
    if (r >= 2) {
        // Fiber primitive ζ by the cone operator, then the D-part one degree down.
        Form zeta = fiber_cone(beta, P);
        Form q = vertical_part(zeta - out.H_C, P);
        try {
            out.D = solve_vertical_gluing(q, P, r);
            H += relative_d(c_part_form(*out.D, P, true), P);
        } catch (const ExactnessError&) {
            // ζ − H_C is not closed when the C-part misses β; the correction absorbs it.
        }
    }
    if (!out.c_residual.is_zero()) out.correction = fiber_cone(vertical_part(out.c_residual, P), P);
    out.H = vertical_part(H + out.correction, P);

    Form de = whitney(t_coords(P.tau));
    out.theodg_residual = canonicalize(wedge(de, pulled - out.H.d()), P.context);
    return out;
}

CoordSystem restricted_context(const PrismData& P, const Simplex& tau_prime, const std::vector<Simplex>& sub_fibers) {
    CoordSystem cs = prism_context(tau_prime, sub_fibers);
    for (std::size_t j = 0; j < P.fibers.size(); ++j)
        if (!tau_prime.contains(P.tau.vertices[j])) cs.groups.push_back(mu_coords(P.tau.vertices[j], P.fibers[j]));
    return cs;
}

Form descend(const Form& H, const PrismData& P) {
    std::map<Var, Poly> coeff_images;
    std::map<Var, Poly> dvar_images;
    for (std::size_t j = 0; j < P.fibers.size(); ++j) {
        const VertexId y = P.tau.vertices[j];
        Poly t;
        for (VertexId v : P.fibers[j].vertices) {
            t += Poly::var(Var::lambda(v));
            coeff_images[Var::mu(y, v)] = Poly::var(Var::lambda(v)) * Poly::var(inverse_t(y));
        }
        coeff_images[Var::t(y)] = t;
    }
    Form out;
    for (const auto& [key, c] : H.terms()) {
        Form term = Form::scalar(c.substitute(coeff_images));
        for (Var v : key) {
            // Vertical part of dμ_{y,v} = u_y dλ_v + λ_v du_y.
            const VertexId y = v.first();
            term = wedge(term, Poly::var(inverse_t(y)) * Form::dvar(Var::lambda(v.vertex())));
        }
        out += term;
    }
    return out;
}

Poly cancel_inverses(const Poly& p, bool& leftover) {
    Poly out;
    for (const auto& [m, c] : p.terms()) {
        std::map<Var, int> e;
        for (const auto& [v, k] : m) e[v] = static_cast<int>(k);
        for (auto& [v, k] : e) {
            if (v.kind() != VarKind::U) continue;
            auto tv = Var::t(v.second());
            int cancel = std::min(k, e.count(tv) ? e[tv] : 0);
            k -= cancel;
            if (cancel) e[tv] -= cancel;
            if (k > 0) leftover = true;
        }
        Monomial q;
        for (const auto& [v, k] : e)
            if (k > 0) q.emplace_back(v, static_cast<unsigned>(k));
        out.add_term(q, c);
    }
    return out;
}

bool lifts_back(const Form& hs, const Form& H, const PrismData& P) {
    std::map<Var, Poly> images;
    for (std::size_t j = 0; j < P.fibers.size(); ++j) {
        const VertexId y = P.tau.vertices[j];
        for (VertexId v : P.fibers[j].vertices)
            images[Var::lambda(v)] = Poly::var(Var::t(y)) * Poly::var(Var::mu(y, v));
    }
    Form lifted;
    bool leftover = false;
    for (const auto& [key, c] : hs.terms()) {
        Poly coeff = c.substitute(images);
        Form term = Form::scalar(Poly(1));
        for (Var v : key) {
            VertexId base = -1;
            for (std::size_t j = 0; j < P.fibers.size(); ++j)
                if (P.fibers[j].contains(v.vertex())) base = P.tau.vertices[j];
            coeff *= Poly::var(Var::t(base));
            term = wedge(term, Form::dvar(Var::mu(base, v.vertex())));
        }
        lifted += cancel_inverses(coeff, leftover) * term;
    }
    if (leftover) return false;
    return canonicalize(vertical_part(lifted - H, P), P.context).is_zero();
}

/// H_a − H_b restricted to the common face (same base simplex), canonical.
Form mismatch_on_common(const SimplicialMorphism& f, const PrismPrimitive& a, const PrismPrimitive& b,
                        const VertexList& common) {
    auto drop = [&](const PrismData& P) {
        std::set<Var> gone;
        for (std::size_t j = 0; j < P.fibers.size(); ++j)
            for (VertexId v : P.fibers[j].vertices)
                if (!std::binary_search(common.begin(), common.end(), v)) gone.insert(Var::mu(P.tau.vertices[j], v));
        return gone;
    };
    PrismData P12 = make_prism(f, Simplex(common));
    return canonicalize(restrict_zero(a.H, drop(a.prism)) - restrict_zero(b.H, drop(b.prism)), P12.context);
}

/// H specialized to t_j = 0 for the given t variables. A surviving t is
/// eliminated first so that the relation on the face is respected.
Form specialize(const Form& H, const PrismData& P, const std::set<Var>& gone) {
    CoordSystem reordered = P.context;
    std::stable_partition(reordered.groups.front().begin(), reordered.groups.front().end(),
                          [&](Var v) { return gone.count(v) > 0; });
    return restrict_zero(canonicalize(H, reordered), gone);
}

bool depends_on_t_only(const Form& a) {
    if (a.is_zero()) return true;
    if (a.terms().size() != 1 || !a.terms().begin()->first.empty()) return false;
    for (Var v : a.variables())
        if (v.kind() != VarKind::T) return false;
    return true;
}

/// The homogeneous polynomial of degree D in t_0..t_k agreeing with p on Σt = 1.
Poly homogenize(const Poly& p, const std::vector<Var>& t, unsigned D) {
    Poly sum;
    for (Var v : t) sum += Poly::var(v);
    Poly out;
    for (const auto& [m, c] : p.terms()) out += Poly::monomial(m, c) * pow(sum, D - monomial_degree(m));
    return out;
}

/// A function on τ restricting to data[j] on the facet t_j = 0, by
/// inclusion-exclusion over proper subsets of facets. Compatible data agree
/// as homogeneous polynomials, which is what makes the telescoping exact.
Poly extend_from_boundary(const std::vector<Var>& t, const std::vector<Poly>& data) {
    const std::size_t k = t.size();
    // Degree at least 1, so that the term for all facets together vanishes.
    unsigned D = 1;
    for (const auto& b : data) D = std::max(D, b.total_degree());
    std::vector<Poly> hom;
    for (const auto& b : data) hom.push_back(homogenize(b, t, D));
    Poly out;
    for (std::uint32_t J = 1; J + 1 < (std::uint32_t{1} << k); ++J) {
        std::set<Var> zero;
        std::size_t lead = k;
        for (std::size_t j = 0; j < k; ++j)
            if (J >> j & 1) {
                zero.insert(t[j]);
                lead = std::min(lead, j);
            }
        Poly term = hom[lead].restrict_zero(zero);
        if (zero.size() % 2 == 0) term = -term;
        out += term;
    }
    return out;
}

/// For r = 1 the prism primitives are functions, each fixed up to a function
/// of t. Base simplices are taken by increasing dimension: the first prism of
/// each family over τ is fitted to the faces already fixed, the others follow
/// through their common faces over τ.
void glue_functions(const SimplicialMorphism& f, PrimitiveResult& res, const std::map<VertexList, std::size_t>& by_sigma) {
    std::map<VertexList, std::vector<std::size_t>> over;
    for (std::size_t i = 0; i < res.prisms.size(); ++i) over[res.prisms[i].prism.tau.vertices].push_back(i);
    std::vector<VertexList> taus;
    for (const auto& [tau, list] : over) taus.push_back(tau);
    std::stable_sort(taus.begin(), taus.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });

    auto shift = [&](PrismPrimitive& pp, const Poly& c) {
        if (c.is_zero()) return;
        pp.fiber_constant += c;
        pp.H = vertical_part(pp.H + Form::scalar(c), pp.prism);
    };

    for (const auto& tau : taus) {
        const auto& members = over[tau];
        std::set<std::size_t> seen;
        for (std::size_t root : members) {
            if (seen.count(root)) continue;
            seen.insert(root);
            PrismPrimitive& R = res.prisms[root];
            const PrismData& P = R.prism;
            if (P.tau.vertices.size() > 1) {
                std::vector<Var> t = t_coords(P.tau);
                std::vector<Poly> data;
                bool fits = true;
                for (std::size_t j = 0; j < t.size() && fits; ++j) {
                    VertexList face = P.tau.vertices;
                    face.erase(face.begin() + static_cast<std::ptrdiff_t>(j));
                    auto it = by_sigma.find(f.restrict_over(P.sigma.vertices, face));
                    Form jump = canonicalize(
                        (it == by_sigma.end() ? Form() : res.prisms[it->second].H) - specialize(R.H, P, {t[j]}),
                        restricted_context(P, Simplex(face), fiber_factors(f, Simplex(f.restrict_over(P.sigma.vertices, face)))));
                    fits = depends_on_t_only(jump);
                    data.push_back(jump.coefficient({}));
                }
                if (fits)
                    shift(R, extend_from_boundary(t, data));
                else
                    res.glue_failures.push_back("no fit on the faces of " + P.tau.to_string() + " for " + P.sigma.to_string());
            }
            std::vector<std::size_t> queue{root};
            for (std::size_t head = 0; head < queue.size(); ++head) {
                const std::size_t a = queue[head];
                for (std::size_t b : members) {
                    if (seen.count(b)) continue;
                    const VertexList& s1 = res.prisms[a].prism.sigma.vertices;
                    const VertexList& s2 = res.prisms[b].prism.sigma.vertices;
                    VertexList common;
                    std::set_intersection(s1.begin(), s1.end(), s2.begin(), s2.end(), std::back_inserter(common));
                    if (common.empty() || f.image(common) != tau) continue;
                    Form jump = mismatch_on_common(f, res.prisms[a], res.prisms[b], common);
                    if (!depends_on_t_only(jump)) {
                        res.glue_failures.push_back(Simplex(s1).to_string() + " / " + Simplex(s2).to_string());
                        continue;
                    }
                    shift(res.prisms[b], jump.coefficient({}));
                    seen.insert(b);
                    queue.push_back(b);
                }
            }
        }
    }
}

}  // namespace

PrimitiveResult run_primitive(const SimplicialMorphism& f, const Form& omega, int r, const PrimitiveOptions& opt) {
    if (r < 1) throw std::invalid_argument("run_primitive: r must be at least 1");
    if (!omega.is_zero() && !omega.is_homogeneous(r))
        throw std::domain_error(fmt::format("input form is not of degree {}", r));
    PrimitiveResult res;
    res.r = r;
    // Functions need the point-fiber prisms too; they carry the values that
    // the horizontal specialization lands on.
    const bool glue = r == 1 && opt.glue_fibers;
    const int min_dim = glue ? 0 : r;
    std::map<VertexList, std::size_t> by_sigma;
    for (const auto& sigma : f.source().all_simplices()) {
        if (make_prism(f, sigma).relative_dim() < min_dim) continue;
        by_sigma[sigma.vertices] = res.prisms.size();
        res.prisms.push_back(build_prism_primitive(f, omega, sigma, r));
    }

    if (glue) glue_functions(f, res, by_sigma);

    for (const auto& pp : res.prisms) {
        Form hs = descend(pp.H, pp.prism);
        res.H_S[pp.prism.sigma.vertices] = hs;
        if (!lifts_back(hs, pp.H, pp.prism)) res.descent_failures.push_back(pp.prism.sigma.to_string());
    }

    if (opt.check_horizontal) {
        for (const auto& pp : res.prisms) {
            const PrismData& P = pp.prism;
            for (int k = 0; k < P.tau.dim(); ++k)
                for (const auto& tp : faces(P.tau, k)) {
                    HorizontalReport rep;
                    rep.tau = P.tau.vertices;
                    rep.tau_prime = tp.vertices;
                    rep.sigma = P.sigma.vertices;
                    std::set<Var> gone;
                    std::vector<Simplex> sub;
                    int sub_dim = 0;
                    for (std::size_t j = 0; j < P.fibers.size(); ++j) {
                        if (tp.contains(P.tau.vertices[j])) {
                            sub.push_back(P.fibers[j]);
                            sub_dim += P.fibers[j].dim();
                        } else {
                            gone.insert(Var::t(P.tau.vertices[j]));
                        }
                    }
                    CoordSystem cs = restricted_context(P, tp, sub);
                    Form specialized = specialize(pp.H, P, gone);
                    Form expected;
                    rep.vanishing_case = sub_dim < r;
                    auto it = by_sigma.find(f.restrict_over(P.sigma.vertices, tp.vertices));
                    if (it != by_sigma.end()) {
                        expected = res.prisms[it->second].H;
                    } else if (!rep.vanishing_case) {
                        rep.ok = false;
                        rep.witness = "no prism over the face for " +
                                      Simplex(f.restrict_over(P.sigma.vertices, tp.vertices)).to_string();
                        res.horizontal.push_back(rep);
                        continue;
                    }
                    Form diff = canonicalize(specialized - expected, cs);
                    if (!diff.is_zero()) {
                        rep.ok = false;
                        rep.witness = diff.to_string();
                    }
                    res.horizontal.push_back(rep);
                }
        }
    }

    if (opt.check_gluing) {
        for (std::size_t a = 0; a < res.prisms.size(); ++a)
            for (std::size_t b = a + 1; b < res.prisms.size(); ++b) {
                const PrismData& P1 = res.prisms[a].prism;
                const PrismData& P2 = res.prisms[b].prism;
                if (!(P1.tau == P2.tau)) continue;
                VertexList common;
                std::set_intersection(P1.sigma.vertices.begin(), P1.sigma.vertices.end(), P2.sigma.vertices.begin(),
                                      P2.sigma.vertices.end(), std::back_inserter(common));
                if (common.empty() || f.image(common) != P1.tau.vertices) continue;
                GluingReport g{P1.tau.vertices, P1.sigma.vertices, P2.sigma.vertices, true};
                g.ok = mismatch_on_common(f, res.prisms[a], res.prisms[b], common).is_zero();
                res.gluing.push_back(g);
            }
    }
    return res;
}

}  // namespace prismal
