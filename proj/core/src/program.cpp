#include "dlp/program.hpp"

#include <sstream>

namespace dlp {

program program::ter() { return program(); }

program program::assign(std::string x, expr e) {
    program p;
    p.m_kind = program_kind::assign;
    p.m_var = std::move(x);
    p.m_e1 = std::move(e);
    return p;
}

program program::seq(program a, program b) {
    program p;
    p.m_kind = program_kind::seq;
    p.m_a = std::make_shared<program>(std::move(a));
    p.m_b = std::make_shared<program>(std::move(b));
    return p;
}

program program::ifte(formula c, program a, program b) {
    program p;
    p.m_kind = program_kind::ifte;
    p.m_cond = std::make_shared<formula>(std::move(c));
    p.m_a = std::make_shared<program>(std::move(a));
    p.m_b = std::make_shared<program>(std::move(b));
    return p;
}

program program::loop(formula c, program body) {
    program p;
    p.m_kind = program_kind::loop;
    p.m_cond = std::make_shared<formula>(std::move(c));
    p.m_a = std::make_shared<program>(std::move(body));
    return p;
}

program program::test(formula c) {
    program p;
    p.m_kind = program_kind::test;
    p.m_cond = std::make_shared<formula>(std::move(c));
    return p;
}

program program::choice(program a, program b) {
    program p;
    p.m_kind = program_kind::choice;
    p.m_a = std::make_shared<program>(std::move(a));
    p.m_b = std::make_shared<program>(std::move(b));
    return p;
}

program program::star(program a) {
    program p;
    p.m_kind = program_kind::star;
    p.m_a = std::make_shared<program>(std::move(a));
    return p;
}

program program::alloc(std::string x, expr e) {
    program p;
    p.m_kind = program_kind::alloc;
    p.m_var = std::move(x);
    p.m_e1 = std::move(e);
    return p;
}

program program::load(std::string x, expr e) {
    program p;
    p.m_kind = program_kind::load;
    p.m_var = std::move(x);
    p.m_e1 = std::move(e);
    return p;
}

program program::store_to(expr addr, expr val) {
    program p;
    p.m_kind = program_kind::store_to;
    p.m_e1 = std::move(addr);
    p.m_e2 = std::move(val);
    return p;
}

program program::dispose(expr addr) {
    program p;
    p.m_kind = program_kind::dispose;
    p.m_e1 = std::move(addr);
    return p;
}

void program::collect_vars(std::set<std::string>& out) const {
    switch (m_kind) {
    case program_kind::ter: return;
    case program_kind::assign:
    case program_kind::alloc:
    case program_kind::load:
        out.insert(m_var);
        m_e1.collect_vars(out);
        return;
    case program_kind::store_to:
        m_e1.collect_vars(out);
        m_e2.collect_vars(out);
        return;
    case program_kind::dispose: m_e1.collect_vars(out); return;
    case program_kind::seq:
    case program_kind::choice:
        m_a->collect_vars(out);
        m_b->collect_vars(out);
        return;
    case program_kind::ifte:
        m_cond->collect_vars(out);
        m_a->collect_vars(out);
        m_b->collect_vars(out);
        return;
    case program_kind::loop:
        m_cond->collect_vars(out);
        m_a->collect_vars(out);
        return;
    case program_kind::test: m_cond->collect_vars(out); return;
    case program_kind::star: m_a->collect_vars(out); return;
    }
}

std::set<std::string> program::vars() const {
    std::set<std::string> s;
    collect_vars(s);
    return s;
}

program program::normalized() const {
    switch (m_kind) {
    case program_kind::ter: return *this;
    case program_kind::assign: return assign(m_var, normalize_expr(m_e1));
    case program_kind::alloc: return alloc(m_var, normalize_expr(m_e1));
    case program_kind::load: return load(m_var, normalize_expr(m_e1));
    case program_kind::store_to: return store_to(normalize_expr(m_e1), normalize_expr(m_e2));
    case program_kind::dispose: return dispose(normalize_expr(m_e1));
    case program_kind::seq: return seq(m_a->normalized(), m_b->normalized());
    case program_kind::choice: return choice(m_a->normalized(), m_b->normalized());
    case program_kind::ifte: return ifte(m_cond->normalized(), m_a->normalized(), m_b->normalized());
    case program_kind::loop: return loop(m_cond->normalized(), m_a->normalized());
    case program_kind::test: return test(m_cond->normalized());
    case program_kind::star: return star(m_a->normalized());
    }
    throw std::logic_error("unreachable");
}

static expr psubst(const expr& e, const std::map<std::string, poly>& theta) {
    return to_poly(e).substitute(theta).to_expr();
}

program program::substitute(const std::map<std::string, poly>& theta) const {
    switch (m_kind) {
    case program_kind::ter: return *this;
    case program_kind::assign: return assign(m_var, psubst(m_e1, theta));
    case program_kind::alloc: return alloc(m_var, psubst(m_e1, theta));
    case program_kind::load: return load(m_var, psubst(m_e1, theta));
    case program_kind::store_to: return store_to(psubst(m_e1, theta), psubst(m_e2, theta));
    case program_kind::dispose: return dispose(psubst(m_e1, theta));
    case program_kind::seq: return seq(m_a->substitute(theta), m_b->substitute(theta));
    case program_kind::choice: return choice(m_a->substitute(theta), m_b->substitute(theta));
    case program_kind::ifte:
        return ifte(m_cond->substitute(theta), m_a->substitute(theta), m_b->substitute(theta));
    case program_kind::loop: return loop(m_cond->substitute(theta), m_a->substitute(theta));
    case program_kind::test: return test(m_cond->substitute(theta));
    case program_kind::star: return star(m_a->substitute(theta));
    }
    throw std::logic_error("unreachable");
}

bool program::operator==(const program& p) const {
    if (m_kind != p.m_kind) return false;
    switch (m_kind) {
    case program_kind::ter: return true;
    case program_kind::assign:
    case program_kind::alloc:
    case program_kind::load:
        return m_var == p.m_var && to_poly(m_e1) == to_poly(p.m_e1);
    case program_kind::store_to:
        return to_poly(m_e1) == to_poly(p.m_e1) && to_poly(m_e2) == to_poly(p.m_e2);
    case program_kind::dispose: return to_poly(m_e1) == to_poly(p.m_e1);
    case program_kind::seq:
    case program_kind::choice: return *m_a == *p.m_a && *m_b == *p.m_b;
    case program_kind::ifte: return *m_cond == *p.m_cond && *m_a == *p.m_a && *m_b == *p.m_b;
    case program_kind::loop: return *m_cond == *p.m_cond && *m_a == *p.m_a;
    case program_kind::test: return *m_cond == *p.m_cond;
    case program_kind::star: return *m_a == *p.m_a;
    }
    return false;
}

std::string program::to_string() const {
    std::ostringstream os;
    switch (m_kind) {
    case program_kind::ter: os << "ter"; break;
    case program_kind::assign: os << m_var << " := " << to_poly(m_e1).to_string(); break;
    case program_kind::seq: os << m_a->to_string() << " ; " << m_b->to_string(); break;
    case program_kind::ifte:
        os << "if " << m_cond->to_string() << " then " << m_a->to_string() << " else "
           << m_b->to_string() << " end";
        break;
    case program_kind::loop:
        os << "while " << m_cond->to_string() << " do " << m_a->to_string() << " end";
        break;
    case program_kind::test: os << "(" << m_cond->to_string() << ") ?"; break;
    case program_kind::choice: os << "(" << m_a->to_string() << ") + (" << m_b->to_string() << ")"; break;
    case program_kind::star: os << "(" << m_a->to_string() << ") *"; break;
    case program_kind::alloc: os << m_var << " := cons(" << to_poly(m_e1).to_string() << ")"; break;
    case program_kind::load: os << m_var << " := [" << to_poly(m_e1).to_string() << "]"; break;
    case program_kind::store_to:
        os << "[" << to_poly(m_e1).to_string() << "] := " << to_poly(m_e2).to_string();
        break;
    case program_kind::dispose: os << "dispose(" << to_poly(m_e1).to_string() << ")"; break;
    }
    return os.str();
}

} // namespace dlp
