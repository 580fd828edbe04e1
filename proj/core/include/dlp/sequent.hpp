#pragma once

#include "dlp/label.hpp"

#include <optional>

namespace dlp {

// Finite map variable -> expression, applied to labels, formulas and sequents
// by replacing free variables. Mapped variables of an enclosing store are
// capture-protected inside its formula.
class substitution {
public:
    substitution() {}
    explicit substitution(std::map<std::string, poly> m) : m_map(std::move(m)) {}

    bool is_identity() const { return m_map.empty(); }
    const std::map<std::string, poly>& mapping() const { return m_map; }
    void set(const std::string& x, poly e) { m_map[x] = std::move(e); }
    const poly* find(const std::string& x) const;

    // this after o: apply(o, apply(this, t)) == apply(compose(o), t)... kept
    // as the usual (this ∘ o)(x) = this(o(x)).
    substitution compose(const substitution& inner) const;

    bool operator==(const substitution& o) const { return m_map == o.m_map; }
    std::string to_string() const;

private:
    std::map<std::string, poly> m_map;
};

enum class labeled_kind { labeled, transition, termination };

// sigma : phi, (alpha, sigma) -> (alpha', sigma'), or sigma |v alpha.
class labeled_formula {
public:
    labeled_formula() : m_kind(labeled_kind::labeled) {}

    static labeled_formula labeled(label l, formula f);
    static labeled_formula transition(program a, label l, program a2, label l2);
    static labeled_formula termination(label l, program a);

    labeled_kind kind() const { return m_kind; }
    const label& lab() const { return m_l1; }
    const label& lab2() const { return m_l2; }
    const formula& fml() const { return m_f; }
    const program& prog() const { return m_p1; }
    const program& prog2() const { return m_p2; }

    bool is_dynamic() const { return m_kind == labeled_kind::labeled && m_f.is_dynamic(); }

    labeled_formula normalized() const;
    labeled_formula substitute(const substitution& theta) const;
    std::set<std::string> free_vars() const;

    bool operator==(const labeled_formula& o) const;
    bool operator!=(const labeled_formula& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    labeled_kind m_kind;
    label m_l1, m_l2;
    formula m_f;
    program m_p1, m_p2;
};

// Two-sided multiset sequent; equality is multiset equality after
// normalization.
struct sequent {
    std::vector<labeled_formula> left;
    std::vector<labeled_formula> right;

    sequent() {}
    sequent(std::vector<labeled_formula> l, std::vector<labeled_formula> r)
        : left(std::move(l)), right(std::move(r)) {}

    sequent normalized() const;
    sequent substitute(const substitution& theta) const;
    std::set<std::string> free_vars() const;

    bool same_as(const sequent& o) const; // multiset equality, normalized

    std::string to_string() const;
};

// One-sided matching: finds theta with substitute(template_, theta) ==
// target (normalized). Target variables are never bound; failure is the
// NoMatch verdict (nullopt).
std::optional<substitution> match_label(const store& template_, const store& target);
std::optional<substitution> match_label(const sequent& template_, const sequent& target);

// Most specific common template of two stores over the same variable set;
// both returned substitutions reproduce the inputs.
struct anti_unify_result {
    store template_;
    substitution theta1, theta2;
};
anti_unify_result anti_unify(const store& s1, const store& s2, fresh_supply& fresh);

// Syntactic sufficient criterion for free labels: every stored expression is
// a*t + b with a in {+1,-1}, b an integer literal, t a variable not occurring
// in A, and the t's pairwise distinct.
bool is_free_label(const store& s, const std::vector<formula>& a);

} // namespace dlp
