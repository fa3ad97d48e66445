#include "prismal/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace prismal {

Var::Var(VarKind kind, int a, int b) {
    if (a < 0 || b < 0 || static_cast<std::uint64_t>(a) > kMask || static_cast<std::uint64_t>(b) > kMask)
        throw std::invalid_argument("variable label out of range");
    key_ = (static_cast<std::uint64_t>(kind) << 56) | (static_cast<std::uint64_t>(a) << 28) |
           static_cast<std::uint64_t>(b);
}

std::string Var::name() const {
    switch (kind()) {
        case VarKind::Lambda: return "l:" + std::to_string(second());
        case VarKind::T: return "t:" + std::to_string(second());
        case VarKind::Mu: return "m:" + std::to_string(first()) + ":" + std::to_string(second());
        case VarKind::U: return "u:" + std::to_string(second());
    }
    return "?";
}

namespace {

int parse_label(const std::string& s) {
    if (s.empty() || s.size() > 9 || !std::all_of(s.begin(), s.end(), ::isdigit))
        throw std::invalid_argument("bad variable label '" + s + "'");
    return std::stoi(s);
}

}  // namespace

Var Var::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() == 2) {
        int b = parse_label(parts[1]);
        if (parts[0] == "l") return lambda(b);
        if (parts[0] == "t") return t(b);
        if (parts[0] == "u") return u(b);
    } else if (parts.size() == 3 && parts[0] == "m") {
        return mu(parse_label(parts[1]), parse_label(parts[2]));
    }
    throw std::invalid_argument("bad variable name '" + text + "'");
}

Monomial monomial_product(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (i->first < j->first) {
            out.push_back(*i++);
        } else if (j->first < i->first) {
            out.push_back(*j++);
        } else {
            out.emplace_back(i->first, i->second + j->second);
            ++i;
            ++j;
        }
    }
    out.insert(out.end(), i, a.end());
    out.insert(out.end(), j, b.end());
    return out;
}

unsigned monomial_degree(const Monomial& m) {
    unsigned d = 0;
    for (const auto& [v, e] : m) d += e;
    return d;
}

Poly::Poly(const Rational& c) {
    if (c != 0) terms_.emplace(Monomial{}, c);
}

Poly Poly::var(Var v, unsigned exponent) {
    Poly p;
    if (exponent == 0)
        p.terms_.emplace(Monomial{}, 1);
    else
        p.terms_.emplace(Monomial{{v, exponent}}, 1);
    return p;
}

Poly Poly::monomial(const Monomial& m, const Rational& c) {
    Poly p;
    p.add_term(m, c);
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational Poly::constant_term() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly& Poly::operator+=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) out.add_term(monomial_product(ma, mb), ca * cb);
    return out;
}

Poly& Poly::operator*=(const Poly& o) {
    *this = *this * o;
    return *this;
}

Poly& Poly::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
    } else {
        for (auto& [m, v] : terms_) v *= c;
    }
    return *this;
}

Poly Poly::operator-() const {
    Poly out = *this;
    for (auto& [m, v] : out.terms_) v = -v;
    return out;
}

Poly Poly::derivative(Var v) const {
    Poly out;
    for (const auto& [m, c] : terms_) {
        auto it = std::find_if(m.begin(), m.end(), [&](const auto& p) { return p.first == v; });
        if (it == m.end()) continue;
        Monomial dm = m;
        auto& e = dm[it - m.begin()];
        Rational coeff = c * e.second;
        if (--e.second == 0) dm.erase(dm.begin() + (it - m.begin()));
        out.add_term(dm, coeff);
    }
    return out;
}

Poly Poly::substitute(const std::map<Var, Poly>& images) const {
    // Powers are cached since the same variable recurs across terms.
    std::map<std::pair<Var, unsigned>, Poly> powers;
    auto power_of = [&](Var v, unsigned e, const Poly& base) -> const Poly& {
        auto key = std::make_pair(v, e);
        auto it = powers.find(key);
        if (it != powers.end()) return it->second;
        return powers.emplace(key, pow(base, e)).first->second;
    };
    Poly out;
    for (const auto& [m, c] : terms_) {
        Monomial kept;
        Poly factor(c);
        for (const auto& [v, e] : m) {
            auto it = images.find(v);
            if (it == images.end())
                kept.emplace_back(v, e);
            else
                factor *= power_of(v, e, it->second);
        }
        if (kept.empty()) {
            out += factor;
        } else {
            for (const auto& [fm, fc] : factor.terms_) out.add_term(monomial_product(kept, fm), fc);
        }
    }
    return out;
}

Poly Poly::restrict_zero(const std::set<Var>& vars) const {
    Poly out;
    for (const auto& [m, c] : terms_) {
        bool vanishes = std::any_of(m.begin(), m.end(), [&](const auto& p) { return vars.count(p.first) > 0; });
        if (!vanishes) out.terms_.emplace(m, c);
    }
    return out;
}

unsigned Poly::total_degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, monomial_degree(m));
    return d;
}

std::map<unsigned, Poly> Poly::homogeneous_parts(const std::set<Var>& in) const {
    std::map<unsigned, Poly> parts;
    for (const auto& [m, c] : terms_) {
        unsigned d = 0;
        for (const auto& [v, e] : m)
            if (in.count(v)) d += e;
        parts[d].terms_.emplace(m, c);
    }
    return parts;
}

std::set<Var> Poly::variables() const {
    std::set<Var> out;
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m) out.insert(v);
    return out;
}

Rational Poly::evaluate(const std::map<Var, Rational>& point) const {
    Rational total = 0;
    for (const auto& [m, c] : terms_) {
        Rational term = c;
        for (const auto& [v, e] : m) {
            auto it = point.find(v);
            if (it == point.end()) throw std::invalid_argument("no value for " + v.name());
            Rational p;
            mpz_pow_ui(p.get_num_mpz_t(), it->second.get_num_mpz_t(), e);
            mpz_pow_ui(p.get_den_mpz_t(), it->second.get_den_mpz_t(), e);
            term *= p;
        }
        total += term;
    }
    return total;
}

double Poly::evaluate_double(const std::map<Var, double>& point) const {
    double total = 0;
    for (const auto& [m, c] : terms_) {
        double term = c.get_d();
        for (const auto& [v, e] : m) {
            auto it = point.find(v);
            if (it == point.end()) throw std::invalid_argument("no value for " + v.name());
            term *= std::pow(it->second, static_cast<double>(e));
        }
        total += term;
    }
    return total;
}

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) out += " + ";
        first = false;
        out += rational_to_string(c);
        for (const auto& [v, e] : m) {
            out += "*" + v.name();
            if (e > 1) out += "^" + std::to_string(e);
        }
    }
    return out;
}

Poly pow(const Poly& p, unsigned e) {
    Poly result(1);
    Poly base = p;
    while (e > 0) {
        if (e & 1u) result *= base;
        e >>= 1;
        if (e > 0) base *= base;
    }
    return result;
}

Rational factorial(unsigned n) {
    mpz_class z;
    mpz_fac_ui(z.get_mpz_t(), n);
    return Rational(z);
}

Rational binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    mpz_class z;
    mpz_bin_uiui(z.get_mpz_t(), n, k);
    return Rational(z);
}

std::string rational_to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& text) {
    Rational q;
    if (text.empty() || q.set_str(text, 10) != 0 || q.get_den() == 0)
        throw std::invalid_argument("bad rational '" + text + "'");
    q.canonicalize();
    return q;
}

}  // namespace prismal
