#include "dlp/formula.hpp"
#include "dlp/program.hpp"

#include <sstream>

namespace dlp {

const char* cmp_op_text(cmp_op op) {
    switch (op) {
    case cmp_op::eq: return "=";
    case cmp_op::lt: return "<";
    case cmp_op::le: return "<=";
    case cmp_op::gt: return ">";
    case cmp_op::ge: return ">=";
    }
    return "?";
}

bool cmp_holds(cmp_op op, const rational& a, const rational& b) {
    switch (op) {
    case cmp_op::eq: return a == b;
    case cmp_op::lt: return a < b;
    case cmp_op::le: return a <= b;
    case cmp_op::gt: return a > b;
    case cmp_op::ge: return a >= b;
    }
    return false;
}

formula::formula() : m_kind(formula_kind::bool_lit), m_bool(true) {}

formula formula::cmp(expr a, cmp_op op, expr b) {
    formula f;
    f.m_kind = formula_kind::cmp;
    f.m_e1 = std::move(a);
    f.m_e2 = std::move(b);
    f.m_op = op;
    return f;
}

formula formula::bool_lit(bool v) {
    formula f;
    f.m_kind = formula_kind::bool_lit;
    f.m_bool = v;
    return f;
}

formula formula::points_to(expr addr, expr val) {
    formula f;
    f.m_kind = formula_kind::points_to;
    f.m_e1 = std::move(addr);
    f.m_e2 = std::move(val);
    return f;
}

formula formula::neg(formula a) {
    formula f;
    f.m_kind = formula_kind::neg;
    f.m_f1 = std::make_shared<formula>(std::move(a));
    return f;
}

formula formula::conj(formula a, formula b) {
    formula f;
    f.m_kind = formula_kind::conj;
    f.m_f1 = std::make_shared<formula>(std::move(a));
    f.m_f2 = std::make_shared<formula>(std::move(b));
    return f;
}

formula formula::disj(formula a, formula b) {
    formula f;
    f.m_kind = formula_kind::disj;
    f.m_f1 = std::make_shared<formula>(std::move(a));
    f.m_f2 = std::make_shared<formula>(std::move(b));
    return f;
}

formula formula::impl(formula a, formula b) {
    formula f;
    f.m_kind = formula_kind::impl;
    f.m_f1 = std::make_shared<formula>(std::move(a));
    f.m_f2 = std::make_shared<formula>(std::move(b));
    return f;
}

formula formula::box(program p, formula a) {
    formula f;
    f.m_kind = formula_kind::box;
    f.m_prog = std::make_shared<program>(std::move(p));
    f.m_f1 = std::make_shared<formula>(std::move(a));
    return f;
}

formula formula::dia(program p, formula a) {
    formula f;
    f.m_kind = formula_kind::dia;
    f.m_prog = std::make_shared<program>(std::move(p));
    f.m_f1 = std::make_shared<formula>(std::move(a));
    return f;
}

formula formula::tfirst(formula a) {
    formula f;
    f.m_kind = formula_kind::tfirst;
    f.m_f1 = std::make_shared<formula>(std::move(a));
    return f;
}

formula formula::suffix(formula a, formula b) {
    formula f;
    f.m_kind = formula_kind::suffix;
    f.m_f1 = std::make_shared<formula>(std::move(a));
    f.m_f2 = std::make_shared<formula>(std::move(b));
    return f;
}

formula formula::sep(formula a, formula b) {
    formula f;
    f.m_kind = formula_kind::sep;
    f.m_f1 = std::make_shared<formula>(std::move(a));
    f.m_f2 = std::make_shared<formula>(std::move(b));
    return f;
}

formula formula::eventually(formula f) {
    return disj(f, suffix(bool_lit(true), f));
}

formula formula::next(formula f) {
    return suffix(bool_lit(false), f);
}

bool formula::is_dynamic() const {
    switch (m_kind) {
    case formula_kind::cmp:
    case formula_kind::bool_lit:
    case formula_kind::points_to: return false;
    case formula_kind::box:
    case formula_kind::dia: return true;
    case formula_kind::neg:
    case formula_kind::tfirst: return m_f1->is_dynamic();
    default: return m_f1->is_dynamic() || m_f2->is_dynamic();
    }
}

bool formula::is_temporal() const {
    switch (m_kind) {
    case formula_kind::cmp:
    case formula_kind::bool_lit:
    case formula_kind::points_to: return false;
    case formula_kind::tfirst:
    case formula_kind::suffix: return true;
    case formula_kind::neg: return m_f1->is_temporal();
    case formula_kind::box:
    case formula_kind::dia: return m_f1->is_temporal();
    default: return m_f1->is_temporal() || m_f2->is_temporal();
    }
}

bool formula::is_spatial() const {
    switch (m_kind) {
    case formula_kind::cmp:
    case formula_kind::bool_lit: return false;
    case formula_kind::points_to:
    case formula_kind::sep: return true;
    case formula_kind::neg:
    case formula_kind::tfirst: return m_f1->is_spatial();
    case formula_kind::box:
    case formula_kind::dia: return m_f1->is_spatial();
    default: return m_f1->is_spatial() || m_f2->is_spatial();
    }
}

void formula::collect_vars(std::set<std::string>& out) const {
    switch (m_kind) {
    case formula_kind::cmp:
    case formula_kind::points_to:
        m_e1.collect_vars(out);
        m_e2.collect_vars(out);
        return;
    case formula_kind::bool_lit: return;
    case formula_kind::neg:
    case formula_kind::tfirst: m_f1->collect_vars(out); return;
    case formula_kind::box:
    case formula_kind::dia:
        m_prog->collect_vars(out);
        m_f1->collect_vars(out);
        return;
    default:
        m_f1->collect_vars(out);
        m_f2->collect_vars(out);
        return;
    }
}

std::set<std::string> formula::vars() const {
    std::set<std::string> s;
    collect_vars(s);
    return s;
}

formula formula::normalized() const {
    switch (m_kind) {
    case formula_kind::cmp: return cmp(normalize_expr(m_e1), m_op, normalize_expr(m_e2));
    case formula_kind::points_to: return points_to(normalize_expr(m_e1), normalize_expr(m_e2));
    case formula_kind::bool_lit: return *this;
    case formula_kind::neg: return neg(m_f1->normalized());
    case formula_kind::conj: return conj(m_f1->normalized(), m_f2->normalized());
    case formula_kind::disj: return disj(m_f1->normalized(), m_f2->normalized());
    case formula_kind::impl: return impl(m_f1->normalized(), m_f2->normalized());
    case formula_kind::box: return box(m_prog->normalized(), m_f1->normalized());
    case formula_kind::dia: return dia(m_prog->normalized(), m_f1->normalized());
    case formula_kind::tfirst: return tfirst(m_f1->normalized());
    case formula_kind::suffix: return suffix(m_f1->normalized(), m_f2->normalized());
    case formula_kind::sep: return sep(m_f1->normalized(), m_f2->normalized());
    }
    throw std::logic_error("unreachable");
}

static expr subst_expr(const expr& e, const std::map<std::string, poly>& theta) {
    return to_poly(e).substitute(theta).to_expr();
}

formula formula::substitute(const std::map<std::string, poly>& theta) const {
    switch (m_kind) {
    case formula_kind::cmp: return cmp(subst_expr(m_e1, theta), m_op, subst_expr(m_e2, theta));
    case formula_kind::points_to: return points_to(subst_expr(m_e1, theta), subst_expr(m_e2, theta));
    case formula_kind::bool_lit: return *this;
    case formula_kind::neg: return neg(m_f1->substitute(theta));
    case formula_kind::conj: return conj(m_f1->substitute(theta), m_f2->substitute(theta));
    case formula_kind::disj: return disj(m_f1->substitute(theta), m_f2->substitute(theta));
    case formula_kind::impl: return impl(m_f1->substitute(theta), m_f2->substitute(theta));
    case formula_kind::box: return box(m_prog->substitute(theta), m_f1->substitute(theta));
    case formula_kind::dia: return dia(m_prog->substitute(theta), m_f1->substitute(theta));
    case formula_kind::tfirst: return tfirst(m_f1->substitute(theta));
    case formula_kind::suffix: return suffix(m_f1->substitute(theta), m_f2->substitute(theta));
    case formula_kind::sep: return sep(m_f1->substitute(theta), m_f2->substitute(theta));
    }
    throw std::logic_error("unreachable");
}

bool formula::operator==(const formula& f) const {
    if (m_kind != f.m_kind) return false;
    switch (m_kind) {
    case formula_kind::cmp:
        return m_op == f.m_op && to_poly(m_e1) == to_poly(f.m_e1) && to_poly(m_e2) == to_poly(f.m_e2);
    case formula_kind::points_to:
        return to_poly(m_e1) == to_poly(f.m_e1) && to_poly(m_e2) == to_poly(f.m_e2);
    case formula_kind::bool_lit: return m_bool == f.m_bool;
    case formula_kind::neg:
    case formula_kind::tfirst: return *m_f1 == *f.m_f1;
    case formula_kind::box:
    case formula_kind::dia: return *m_prog == *f.m_prog && *m_f1 == *f.m_f1;
    default: return *m_f1 == *f.m_f1 && *m_f2 == *f.m_f2;
    }
}

std::string formula::to_string() const {
    std::ostringstream os;
    switch (m_kind) {
    case formula_kind::cmp:
        os << to_poly(m_e1).to_string() << " " << cmp_op_text(m_op) << " " << to_poly(m_e2).to_string();
        break;
    case formula_kind::bool_lit: os << (m_bool ? "true" : "false"); break;
    case formula_kind::points_to:
        os << to_poly(m_e1).to_string() << " |-> " << to_poly(m_e2).to_string();
        break;
    case formula_kind::neg: os << "!(" << m_f1->to_string() << ")"; break;
    case formula_kind::conj: os << "(" << m_f1->to_string() << ") && (" << m_f2->to_string() << ")"; break;
    case formula_kind::disj: os << "(" << m_f1->to_string() << ") || (" << m_f2->to_string() << ")"; break;
    case formula_kind::impl: os << "(" << m_f1->to_string() << ") -> (" << m_f2->to_string() << ")"; break;
    case formula_kind::box: os << "[" << m_prog->to_string() << "] (" << m_f1->to_string() << ")"; break;
    case formula_kind::dia: os << "<" << m_prog->to_string() << "> (" << m_f1->to_string() << ")"; break;
    case formula_kind::tfirst: os << "first (" << m_f1->to_string() << ")"; break;
    case formula_kind::suffix: os << "(" << m_f1->to_string() << ") Suf (" << m_f2->to_string() << ")"; break;
    case formula_kind::sep: os << "(" << m_f1->to_string() << ") ** (" << m_f2->to_string() << ")"; break;
    }
    return os.str();
}

} // namespace dlp
