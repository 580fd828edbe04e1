#pragma once

#include "dlp/rational.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace dlp {

// ---------------------------------------------------------------------------
// Expression ASTs: integer literals, variables, -, +, -, *, and division by a
// nonzero integer literal. Division by anything else is rejected on
// construction.
// ---------------------------------------------------------------------------

enum class expr_kind { lit, var, neg, add, sub, mul, divk };

class expr {
public:
    expr() : m_kind(expr_kind::lit), m_lit(0), m_div(1) {}

    static expr lit(int64_t v);
    static expr var(const std::string& name);
    static expr neg(expr e);
    static expr add(expr a, expr b);
    static expr sub(expr a, expr b);
    static expr mul(expr a, expr b);
    static expr divk(expr a, int64_t k); // throws on k == 0

    expr_kind kind() const { return m_kind; }
    int64_t lit_value() const { return m_lit; }
    const std::string& var_name() const { return m_name; }
    const expr& arg0() const { return *m_a; }
    const expr& arg1() const { return *m_b; }
    int64_t divisor() const { return m_div; }

    void collect_vars(std::set<std::string>& out) const;
    std::set<std::string> vars() const;

    std::string to_string() const;

private:
    expr_kind m_kind;
    int64_t m_lit;
    std::string m_name;
    std::shared_ptr<const expr> m_a, m_b;
    int64_t m_div;
};

// Ground evaluation with exact integer division. Unassigned variables are an
// error; a division that does not divide evenly throws non_integral_division.
int64_t eval_expr(const expr& e, const std::map<std::string, int64_t>& g);

// ---------------------------------------------------------------------------
// Canonical form: multivariate polynomial with rational coefficients,
// monomials ordered by a fixed total order, no zero terms.
// ---------------------------------------------------------------------------

// Sorted (variable, exponent) pairs, exponents > 0. Empty = the unit monomial.
struct monomial {
    std::vector<std::pair<std::string, int>> pows;
    bool operator==(const monomial& o) const { return pows == o.pows; }
    bool operator<(const monomial& o) const { return pows < o.pows; }
    monomial operator*(const monomial& o) const;
    std::string to_string() const;
};

class poly {
public:
    poly() {}
    explicit poly(const rational& c);
    static poly var(const std::string& name);

    bool is_zero() const { return m_terms.empty(); }
    bool is_constant() const;
    rational constant_value() const; // requires is_constant()

    // Bare variable with coefficient 1 and no other terms.
    bool is_variable(std::string* name = nullptr) const;

    // Affine shape a*t + b with a in {1,-1}, b an integer constant.
    bool is_unit_affine(std::string* var_out, int64_t* a_out, rational* b_out) const;

    poly operator+(const poly& o) const;
    poly operator-(const poly& o) const;
    poly operator*(const poly& o) const;
    poly operator-() const;
    poly scaled(const rational& c) const;

    bool operator==(const poly& o) const { return m_terms == o.m_terms; }
    bool operator!=(const poly& o) const { return !(*this == o); }
    bool operator<(const poly& o) const; // fixed total order, for containers

    rational eval(const std::map<std::string, rational>& g) const;
    poly substitute(const std::map<std::string, poly>& theta) const;

    void collect_vars(std::set<std::string>& out) const;
    std::set<std::string> vars() const;

    const std::map<monomial, rational>& terms() const { return m_terms; }

    // Canonical expression, printable in the surface grammar (x*x instead of
    // powers, rational coefficients as num*mono/den).
    expr to_expr() const;
    std::string to_string() const;

private:
    std::map<monomial, rational> m_terms;
    void add_term(const monomial& m, const rational& c);
};

// Canonical normal form of an arbitrary expression; idempotent, and
// normalize(e1) == normalize(e2) iff e1 - e2 is the zero polynomial.
poly to_poly(const expr& e);
expr normalize_expr(const expr& e);

} // namespace dlp
