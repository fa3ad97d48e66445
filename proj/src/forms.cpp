#include "prismal/forms.hpp"

#include <algorithm>
#include <stdexcept>

namespace prismal {

std::set<Var> CoordSystem::variables() const {
    std::set<Var> out;
    for (const auto& g : groups) out.insert(g.begin(), g.end());
    return out;
}

bool CoordSystem::contains(Var v) const {
    for (const auto& g : groups)
        if (std::find(g.begin(), g.end(), v) != g.end()) return true;
    return false;
}

int sort_sign(std::vector<Var>& vars) {
    int sign = 1;
    for (std::size_t i = 1; i < vars.size(); ++i) {
        for (std::size_t j = i; j > 0 && vars[j] < vars[j - 1]; --j) {
            std::swap(vars[j], vars[j - 1]);
            sign = -sign;
        }
    }
    for (std::size_t i = 1; i < vars.size(); ++i)
        if (vars[i] == vars[i - 1]) return 0;
    return sign;
}

Form Form::scalar(const Poly& p) {
    Form f;
    f.add_term({}, p);
    return f;
}

Form Form::dvar(Var v) { return basis({v}); }

Form Form::basis(std::vector<Var> dvars, const Poly& coeff) {
    Form f;
    int s = sort_sign(dvars);
    if (s != 0) f.add_term(dvars, s > 0 ? coeff : -coeff);
    return f;
}

int Form::degree() const {
    int deg = -1;
    for (const auto& [k, c] : terms_) deg = std::max(deg, static_cast<int>(k.size()));
    return deg;
}

bool Form::is_homogeneous(int deg) const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [&](const auto& t) { return static_cast<int>(t.first.size()) == deg; });
}

Poly Form::coefficient(const std::vector<Var>& sorted_dvars) const {
    auto it = terms_.find(sorted_dvars);
    return it == terms_.end() ? Poly() : it->second;
}

std::set<Var> Form::variables() const {
    std::set<Var> out;
    for (const auto& [k, c] : terms_) {
        out.insert(k.begin(), k.end());
        auto v = c.variables();
        out.insert(v.begin(), v.end());
    }
    return out;
}

void Form::add_term(const std::vector<Var>& sorted_dvars, const Poly& coeff) {
    if (coeff.is_zero()) return;
    auto [it, inserted] = terms_.emplace(sorted_dvars, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Form& Form::operator+=(const Form& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
}

Form& Form::operator-=(const Form& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
}

Form Form::operator-() const {
    Form out;
    for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
    return out;
}

Form operator*(const Poly& p, const Form& a) {
    Form out;
    if (p.is_zero()) return out;
    for (const auto& [k, c] : a.terms_) out.add_term(k, p * c);
    return out;
}

Form wedge(const Form& a, const Form& b) {
    Form out;
    for (const auto& [ka, ca] : a.terms_) {
        for (const auto& [kb, cb] : b.terms_) {
            std::vector<Var> key = ka;
            key.insert(key.end(), kb.begin(), kb.end());
            int s = sort_sign(key);
            if (s == 0) continue;
            Poly c = ca * cb;
            out.add_term(key, s > 0 ? c : -c);
        }
    }
    return out;
}

Form wedge_all(const std::vector<Form>& factors) {
    Form out = Form::scalar(1);
    for (const auto& f : factors) out = wedge(out, f);
    return out;
}

namespace {

Form differentiate(const Form& a, const std::set<Var>* along) {
    Form out;
    for (const auto& [k, c] : a.terms()) {
        for (Var v : c.variables()) {
            if (along && !along->count(v)) continue;
            std::vector<Var> key{v};
            key.insert(key.end(), k.begin(), k.end());
            int s = sort_sign(key);
            if (s == 0) continue;
            Poly dc = c.derivative(v);
            out.add_term(key, s > 0 ? dc : -dc);
        }
    }
    return out;
}

}  // namespace

Form Form::d() const { return differentiate(*this, nullptr); }

Form Form::d_partial(const std::set<Var>& along) const { return differentiate(*this, &along); }

std::string Form::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) out += " + ";
        first = false;
        out += "(" + c.to_string() + ")";
        for (Var v : k) out += " d" + v.name();
    }
    return out;
}

Form pullback(const Form& a, const std::map<Var, Poly>& images) {
    std::map<Var, Form> differentials;
    auto diff_of = [&](Var v) -> const Form& {
        auto it = differentials.find(v);
        if (it != differentials.end()) return it->second;
        auto img = images.find(v);
        Form dv = img == images.end() ? Form::dvar(v) : Form::scalar(img->second).d();
        return differentials.emplace(v, std::move(dv)).first->second;
    };
    Form out;
    for (const auto& [k, c] : a.terms()) {
        Poly coeff = c.substitute(images);
        if (coeff.is_zero()) continue;
        Form piece = Form::scalar(coeff);
        for (Var v : k) {
            piece = wedge(piece, diff_of(v));
            if (piece.is_zero()) break;
        }
        out += piece;
    }
    return out;
}

std::map<Var, Poly> relation_images(const CoordSystem& cs, Eliminate which) {
    std::map<Var, Poly> images;
    for (const auto& g : cs.groups) {
        if (g.empty()) throw std::invalid_argument("empty coordinate group");
        std::size_t skip = which == Eliminate::Last ? g.size() - 1 : 0;
        Poly img(1);
        for (std::size_t i = 0; i < g.size(); ++i)
            if (i != skip) img -= Poly::var(g[i]);
        images.emplace(g[skip], img);
    }
    return images;
}

Form canonicalize(const Form& a, const CoordSystem& cs, Eliminate which) {
    return pullback(a, relation_images(cs, which));
}

Form restrict_zero(const Form& a, const std::set<Var>& dropped) {
    Form out;
    for (const auto& [k, c] : a.terms()) {
        if (std::any_of(k.begin(), k.end(), [&](Var v) { return dropped.count(v) > 0; })) continue;
        out.add_term(k, c.restrict_zero(dropped));
    }
    return out;
}

Form drop_differentials(const Form& a, const std::set<Var>& vars) {
    Form out;
    for (const auto& [k, c] : a.terms())
        if (std::none_of(k.begin(), k.end(), [&](Var v) { return vars.count(v) > 0; })) out.add_term(k, c);
    return out;
}

Rational dirichlet_integral(const std::vector<unsigned>& exponents) {
    Rational num = 1;
    unsigned total = 0;
    for (unsigned e : exponents) {
        num *= factorial(e);
        total += e;
    }
    return num / factorial(total + static_cast<unsigned>(exponents.size()));
}

Poly integrate_top(const Form& a, const CoordSystem& cs, bool slice) {
    Form canon = canonicalize(a, cs, Eliminate::First);
    std::set<Var> cell_vars = cs.variables();
    if (slice) {
        std::set<Var> foreign;
        for (Var v : canon.variables())
            if (!cell_vars.count(v)) foreign.insert(v);
        canon = drop_differentials(canon, foreign);
    }
    // Parameter domain: the non-first coordinates, group by group.
    std::vector<Var> top;
    for (const auto& g : cs.groups) top.insert(top.end(), g.begin() + 1, g.end());
    std::vector<Var> sorted_top = top;
    int orientation = sort_sign(sorted_top);

    Poly out;
    for (const auto& [k, c] : canon.terms()) {
        if (k != sorted_top) throw std::domain_error("form is not of top degree on the cell");
        for (const auto& [m, coeff] : c.terms()) {
            Rational value = coeff * orientation;
            Monomial rest;
            std::map<Var, unsigned> exps;
            for (const auto& [v, e] : m) {
                if (cell_vars.count(v))
                    exps[v] = e;
                else
                    rest.emplace_back(v, e);
            }
            for (const auto& g : cs.groups) {
                std::vector<unsigned> ge;
                for (std::size_t i = 1; i < g.size(); ++i) ge.push_back(exps.count(g[i]) ? exps[g[i]] : 0);
                value *= dirichlet_integral(ge);
            }
            out.add_term(rest, value);
        }
    }
    return out;
}

Form whitney(const std::vector<Var>& coords) {
    if (coords.empty()) throw std::invalid_argument("Whitney form of the empty simplex");
    const std::size_t p = coords.size() - 1;
    Form out;
    for (std::size_t i = 0; i <= p; ++i) {
        std::vector<Var> rest;
        for (std::size_t j = 0; j <= p; ++j)
            if (j != i) rest.push_back(coords[j]);
        Poly c = Poly::var(coords[i]) * factorial(static_cast<unsigned>(p));
        out += Form::basis(rest, i % 2 == 0 ? c : -c);
    }
    return out;
}

Form whitney_prism(const std::vector<std::vector<Var>>& factors) {
    Form out = Form::scalar(1);
    for (const auto& f : factors) out = wedge(out, whitney(f));
    return out;
}

Form radial_contraction(const Form& a, const std::set<Var>& vars) {
    Form out;
    for (const auto& [k, c] : a.terms()) {
        for (std::size_t i = 0; i < k.size(); ++i) {
            if (!vars.count(k[i])) continue;
            std::vector<Var> rest = k;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
            Poly coeff = Poly::var(k[i]) * c;
            out.add_term(rest, i % 2 == 0 ? coeff : -coeff);
        }
    }
    return out;
}

Form cone_primitive(const Form& a, const std::set<Var>& vars) {
    Form out;
    for (const auto& [k, c] : a.terms()) {
        if (k.empty()) throw std::invalid_argument("cone operator needs positive degree");
        for (const auto& [m, part] : c.homogeneous_parts(vars)) {
            Rational scale(1, static_cast<unsigned long>(k.size() + m));
            scale.canonicalize();
            out += radial_contraction(Form::basis(k, part * scale), vars);
        }
    }
    return out;
}

Form poincare_primitive(const Form& a, const CoordSystem& cs) {
    std::set<Var> vars;
    for (const auto& g : cs.groups) vars.insert(g.begin() + 1, g.end());
    return cone_primitive(canonicalize(a, cs, Eliminate::First), vars);
}

Form whitney_antiboundary(const std::vector<Var>& coords) {
    Form out;
    const std::size_t n = coords.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Var> face;
        for (std::size_t k = 0; k < n; ++k)
            if (k != i) face.push_back(coords[k]);
        Form w = whitney(face);
        out += i % 2 ? -w : w;
    }
    Rational scale(1, static_cast<unsigned long>(n));
    return Poly(scale) * out;
}

Poly ode_solve(const Poly& b, const std::set<Var>& vars, unsigned r) {
    if (r == 0) throw std::invalid_argument("ode_solve needs r >= 1");
    Poly out;
    for (const auto& [m, part] : b.homogeneous_parts(vars)) {
        Rational scale(r, r + m);
        scale.canonicalize();
        out += part * scale;
    }
    return out;
}

}  // namespace prismal
