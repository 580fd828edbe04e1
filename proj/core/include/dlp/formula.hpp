#pragma once

#include "dlp/expr.hpp"

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace dlp {

class program;

enum class cmp_op { eq, lt, le, gt, ge };

const char* cmp_op_text(cmp_op op);
bool cmp_holds(cmp_op op, const rational& a, const rational& b);

enum class formula_kind {
    cmp,       // e1 <op> e2
    bool_lit,  // true / false
    points_to, // e |-> e'           (separation logic)
    neg,
    conj,
    disj,
    impl,
    box,       // [alpha] phi
    dia,       // <alpha> phi
    tfirst,    // first phi          (process logic)
    suffix,    // phi Suf psi        (process logic)
    sep        // phi ** psi         (separation logic)
};

class formula {
public:
    formula();

    static formula cmp(expr a, cmp_op op, expr b);
    static formula bool_lit(bool v);
    static formula points_to(expr addr, expr val);
    static formula neg(formula f);
    static formula conj(formula a, formula b);
    static formula disj(formula a, formula b);
    static formula impl(formula a, formula b);
    static formula box(program p, formula f);
    static formula dia(program p, formula f);
    static formula tfirst(formula f);
    static formula suffix(formula a, formula b);
    static formula sep(formula a, formula b);

    // Derived temporal forms, stored in their normalized shapes.
    static formula eventually(formula f); // f || (true Suf f)
    static formula next(formula f);       // false Suf f

    formula_kind kind() const { return m_kind; }
    const expr& lhs() const { return m_e1; }
    const expr& rhs() const { return m_e2; }
    cmp_op op() const { return m_op; }
    bool bool_value() const { return m_bool; }
    const formula& arg0() const { return *m_f1; }
    const formula& arg1() const { return *m_f2; }
    const program& prog() const { return *m_prog; }

    bool is_dynamic() const;  // contains a modality
    bool is_temporal() const; // contains first / Suf
    bool is_spatial() const;  // contains |-> / **

    void collect_vars(std::set<std::string>& out) const;
    std::set<std::string> vars() const;

    // Normalizes every contained expression; compares structurally afterwards.
    formula normalized() const;
    formula substitute(const std::map<std::string, poly>& theta) const;

    bool operator==(const formula& f) const;
    bool operator!=(const formula& f) const { return !(*this == f); }

    std::string to_string() const;

private:
    formula_kind m_kind;
    expr m_e1, m_e2;
    cmp_op m_op = cmp_op::eq;
    bool m_bool = false;
    std::shared_ptr<const formula> m_f1, m_f2;
    std::shared_ptr<const program> m_prog;
};

} // namespace dlp
