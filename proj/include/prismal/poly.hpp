#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace prismal {

using Rational = mpq_class;

/// Coordinate families. Lambda: barycentric coordinates of a simplex of the
/// source complex. T: coordinates of the base simplex. Mu: fiber coordinates
/// of a factor sitting over a base vertex. U: free scratch variables.
enum class VarKind : std::uint8_t { Lambda = 1, T = 2, Mu = 3, U = 4 };

/**
 * A named coordinate function. The integer key orders variables first by
 * kind, then by the two labels, so sorted containers group families together.
 */
class Var {
public:
    Var() = default;

    static Var lambda(int vertex) { return Var(VarKind::Lambda, 0, vertex); }
    static Var t(int base_vertex) { return Var(VarKind::T, 0, base_vertex); }
    static Var mu(int base_vertex, int vertex) { return Var(VarKind::Mu, base_vertex, vertex); }
    static Var u(int index) { return Var(VarKind::U, 0, index); }

    /// Parses "l:3", "t:0", "m:1:7" or "u:2"; throws std::invalid_argument.
    static Var parse(const std::string& text);

    VarKind kind() const { return static_cast<VarKind>(key_ >> 56); }
    int first() const { return static_cast<int>((key_ >> 28) & kMask); }
    int second() const { return static_cast<int>(key_ & kMask); }
    /// The vertex label: the vertex for Lambda and Mu, the base vertex for T.
    int vertex() const { return second(); }
    std::uint64_t key() const { return key_; }
    std::string name() const;

    auto operator<=>(const Var&) const = default;

private:
    static constexpr std::uint64_t kMask = (std::uint64_t{1} << 28) - 1;
    Var(VarKind kind, int a, int b);
    std::uint64_t key_ = 0;
};

/// Sorted (variable, exponent) pairs with positive exponents.
using Monomial = std::vector<std::pair<Var, unsigned>>;

Monomial monomial_product(const Monomial& a, const Monomial& b);
unsigned monomial_degree(const Monomial& m);

/**
 * Multivariate polynomial with exact rational coefficients. Zero
 * coefficients are never stored, so structural equality is value equality.
 */
class Poly {
public:
    using Terms = std::map<Monomial, Rational>;

    Poly() = default;
    Poly(const Rational& c);  // NOLINT: constants convert implicitly
    Poly(long c) : Poly(Rational(c)) {}  // NOLINT
    Poly(int c) : Poly(Rational(c)) {}   // NOLINT
    static Poly var(Var v, unsigned exponent = 1);
    static Poly monomial(const Monomial& m, const Rational& c = 1);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    Poly& operator*=(const Rational& c);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
    friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
    Poly operator-() const;
    bool operator==(const Poly& o) const { return terms_ == o.terms_; }

    void add_term(const Monomial& m, const Rational& c);

    Poly derivative(Var v) const;
    /// Replaces each mapped variable by its image; unmapped variables stay.
    Poly substitute(const std::map<Var, Poly>& images) const;
    /// Sets the given variables to zero.
    Poly restrict_zero(const std::set<Var>& vars) const;

    unsigned total_degree() const;
    /// Splits into parts homogeneous in the given variables (others are
    /// treated as parameters); keys are the partial degrees.
    std::map<unsigned, Poly> homogeneous_parts(const std::set<Var>& in) const;
    std::set<Var> variables() const;

    Rational evaluate(const std::map<Var, Rational>& point) const;
    double evaluate_double(const std::map<Var, double>& point) const;

    std::string to_string() const;

private:
    Terms terms_;
};

Poly pow(const Poly& p, unsigned e);
Rational factorial(unsigned n);
Rational binomial(unsigned n, unsigned k);
std::string rational_to_string(const Rational& q);
/// Parses "num/den" or "num"; throws std::invalid_argument.
Rational parse_rational(const std::string& text);

}  // namespace prismal
