#pragma once

#include "prismal/poly.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace prismal {

/// Ordered coordinate groups; the variables of each group sum to one.
struct CoordSystem {
    std::vector<std::vector<Var>> groups;

    std::set<Var> variables() const;
    bool contains(Var v) const;
};

/// Sign of the permutation sorting `vars`, or 0 when a variable repeats.
int sort_sign(std::vector<Var>& vars);

/**
 * Differential form with polynomial coefficients. Keys are strictly
 * increasing lists of differentials; degrees may be mixed.
 */
class Form {
public:
    using Terms = std::map<std::vector<Var>, Poly>;

    Form() = default;
    static Form scalar(const Poly& p);
    static Form dvar(Var v);
    /// coeff * dv_0 ^ ... ^ dv_k with the differentials in the given order.
    static Form basis(std::vector<Var> dvars, const Poly& coeff = Poly(1));

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// Highest degree present; -1 for the zero form.
    int degree() const;
    bool is_homogeneous(int deg) const;
    Poly coefficient(const std::vector<Var>& sorted_dvars) const;
    std::set<Var> variables() const;

    void add_term(const std::vector<Var>& sorted_dvars, const Poly& coeff);

    Form& operator+=(const Form& o);
    Form& operator-=(const Form& o);
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    Form operator-() const;
    friend Form operator*(const Poly& p, const Form& a);
    friend Form operator*(const Form& a, const Poly& p) { return p * a; }
    bool operator==(const Form& o) const { return terms_ == o.terms_; }

    friend Form wedge(const Form& a, const Form& b);
    Form d() const;
    /// Exterior derivative along the given variables only.
    Form d_partial(const std::set<Var>& along) const;

    std::string to_string() const;

private:
    Terms terms_;
};

Form wedge(const Form& a, const Form& b);
Form wedge_all(const std::vector<Form>& factors);

/// Substitutes coefficients and sends each mapped dv to d(image).
Form pullback(const Form& a, const std::map<Var, Poly>& images);

enum class Eliminate { Last, First };

/// The substitution eliminating one coordinate per group.
std::map<Var, Poly> relation_images(const CoordSystem& cs, Eliminate which = Eliminate::Last);

/// Normal form modulo the group relations; variables outside every group
/// are left alone and act as parameters.
Form canonicalize(const Form& a, const CoordSystem& cs, Eliminate which = Eliminate::Last);

/// Sets the variables and their differentials to zero.
Form restrict_zero(const Form& a, const std::set<Var>& dropped);

/// Drops every term whose differentials meet `vars`.
Form drop_differentials(const Form& a, const std::set<Var>& vars);

/**
 * Integral over the cell described by `cs` (a product of standard simplices).
 * The result is a polynomial in the variables outside `cs`. With
 * `slice` set, terms carrying differentials of outside variables are ignored,
 * which integrates the restriction to a slice where those are constant.
 * Throws std::domain_error when the form is not of top degree.
 */
Poly integrate_top(const Form& a, const CoordSystem& cs, bool slice = false);

/// Integral of x^e over {x >= 0, Σx <= 1} in R^n, n = exponents.size().
Rational dirichlet_integral(const std::vector<unsigned>& exponents);

/// p! sum_i (-1)^i x_i dx_0 ^ .. (omit i) .. ^ dx_p for ordered coordinates.
Form whitney(const std::vector<Var>& coords);
/// Wedge of the Whitney forms of the factors, in factor order.
Form whitney_prism(const std::vector<std::vector<Var>>& factors);

/// (1/(p+1)) sum_i [s;s_i] ω(s_i;s), whose d is ω(s).
Form whitney_antiboundary(const std::vector<Var>& coords);

/// Interior product with the radial field sum_i x_i d/dx_i over `vars`.
Form radial_contraction(const Form& a, const std::set<Var>& vars);

/**
 * Koszul cone operator at the origin of `vars`: for a form whose
 * differentials lie in `vars` and which is closed along them, the result K
 * satisfies d_partial(K, vars) = a. Other variables are parameters.
 */
Form cone_primitive(const Form& a, const std::set<Var>& vars);

/// Primitive of a closed form by the cone at the first vertex of every
/// group; the result is written in first-eliminated coordinates.
Form poincare_primitive(const Form& a, const CoordSystem& cs);

/// Solution of E + (1/r) sum u_i dE/du_i = B: each part of degree m in
/// `vars` is scaled by r/(r+m).
Poly ode_solve(const Poly& b, const std::set<Var>& vars, unsigned r);

}  // namespace prismal
