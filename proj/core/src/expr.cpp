#include "dlp/expr.hpp"

#include <algorithm>
#include <sstream>

namespace dlp {

expr expr::lit(int64_t v) {
    expr e;
    e.m_kind = expr_kind::lit;
    e.m_lit = v;
    return e;
}

expr expr::var(const std::string& name) {
    expr e;
    e.m_kind = expr_kind::var;
    e.m_name = name;
    return e;
}

expr expr::neg(expr a) {
    expr e;
    e.m_kind = expr_kind::neg;
    e.m_a = std::make_shared<expr>(std::move(a));
    return e;
}

expr expr::add(expr a, expr b) {
    expr e;
    e.m_kind = expr_kind::add;
    e.m_a = std::make_shared<expr>(std::move(a));
    e.m_b = std::make_shared<expr>(std::move(b));
    return e;
}

expr expr::sub(expr a, expr b) {
    expr e;
    e.m_kind = expr_kind::sub;
    e.m_a = std::make_shared<expr>(std::move(a));
    e.m_b = std::make_shared<expr>(std::move(b));
    return e;
}

expr expr::mul(expr a, expr b) {
    expr e;
    e.m_kind = expr_kind::mul;
    e.m_a = std::make_shared<expr>(std::move(a));
    e.m_b = std::make_shared<expr>(std::move(b));
    return e;
}

expr expr::divk(expr a, int64_t k) {
    if (k == 0) throw std::invalid_argument("division by literal zero");
    expr e;
    e.m_kind = expr_kind::divk;
    e.m_a = std::make_shared<expr>(std::move(a));
    e.m_div = k;
    return e;
}

void expr::collect_vars(std::set<std::string>& out) const {
    switch (m_kind) {
    case expr_kind::lit: return;
    case expr_kind::var: out.insert(m_name); return;
    case expr_kind::neg:
    case expr_kind::divk: m_a->collect_vars(out); return;
    case expr_kind::add:
    case expr_kind::sub:
    case expr_kind::mul:
        m_a->collect_vars(out);
        m_b->collect_vars(out);
        return;
    }
}

std::set<std::string> expr::vars() const {
    std::set<std::string> s;
    collect_vars(s);
    return s;
}

std::string expr::to_string() const {
    std::ostringstream os;
    switch (m_kind) {
    case expr_kind::lit: os << m_lit; break;
    case expr_kind::var: os << m_name; break;
    case expr_kind::neg: os << "(0 - " << m_a->to_string() << ")"; break;
    case expr_kind::add: os << "(" << m_a->to_string() << " + " << m_b->to_string() << ")"; break;
    case expr_kind::sub: os << "(" << m_a->to_string() << " - " << m_b->to_string() << ")"; break;
    case expr_kind::mul: os << "(" << m_a->to_string() << " * " << m_b->to_string() << ")"; break;
    case expr_kind::divk: os << "(" << m_a->to_string() << ") / " << m_div; break;
    }
    return os.str();
}

int64_t eval_expr(const expr& e, const std::map<std::string, int64_t>& g) {
    switch (e.kind()) {
    case expr_kind::lit: return e.lit_value();
    case expr_kind::var: {
        auto it = g.find(e.var_name());
        if (it == g.end()) throw std::invalid_argument("unassigned variable: " + e.var_name());
        return it->second;
    }
    case expr_kind::neg: return checked_sub(0, eval_expr(e.arg0(), g));
    case expr_kind::add: return checked_add(eval_expr(e.arg0(), g), eval_expr(e.arg1(), g));
    case expr_kind::sub: return checked_sub(eval_expr(e.arg0(), g), eval_expr(e.arg1(), g));
    case expr_kind::mul: return checked_mul(eval_expr(e.arg0(), g), eval_expr(e.arg1(), g));
    case expr_kind::divk: {
        int64_t v = eval_expr(e.arg0(), g);
        int64_t k = e.divisor();
        if (v % k != 0) throw non_integral_division();
        return v / k;
    }
    }
    throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------

monomial monomial::operator*(const monomial& o) const {
    monomial r;
    size_t i = 0, j = 0;
    while (i < pows.size() || j < o.pows.size()) {
        if (j == o.pows.size() || (i < pows.size() && pows[i].first < o.pows[j].first)) {
            r.pows.push_back(pows[i++]);
        } else if (i == pows.size() || o.pows[j].first < pows[i].first) {
            r.pows.push_back(o.pows[j++]);
        } else {
            r.pows.emplace_back(pows[i].first, pows[i].second + o.pows[j].second);
            ++i;
            ++j;
        }
    }
    return r;
}

std::string monomial::to_string() const {
    std::string s;
    for (auto& [v, k] : pows) {
        for (int i = 0; i < k; ++i) {
            if (!s.empty()) s += "*";
            s += v;
        }
    }
    return s;
}

poly::poly(const rational& c) {
    if (!c.is_zero()) m_terms[monomial{}] = c;
}

poly poly::var(const std::string& name) {
    poly p;
    monomial m;
    m.pows.emplace_back(name, 1);
    p.m_terms[m] = rational(1);
    return p;
}

bool poly::is_constant() const {
    return m_terms.empty() || (m_terms.size() == 1 && m_terms.begin()->first.pows.empty());
}

rational poly::constant_value() const {
    if (m_terms.empty()) return rational(0);
    return m_terms.begin()->second;
}

bool poly::is_variable(std::string* name) const {
    if (m_terms.size() != 1) return false;
    auto& [m, c] = *m_terms.begin();
    if (m.pows.size() != 1 || m.pows[0].second != 1) return false;
    if (c != rational(1)) return false;
    if (name) *name = m.pows[0].first;
    return true;
}

bool poly::is_unit_affine(std::string* var_out, int64_t* a_out, rational* b_out) const {
    std::string v;
    rational a, b;
    for (auto& [m, c] : m_terms) {
        if (m.pows.empty()) {
            b = c;
        } else if (m.pows.size() == 1 && m.pows[0].second == 1 && v.empty()) {
            v = m.pows[0].first;
            a = c;
        } else {
            return false;
        }
    }
    if (v.empty()) return false;
    if (a != rational(1) && a != rational(-1)) return false;
    if (!b.is_integer()) return false;
    if (var_out) *var_out = v;
    if (a_out) *a_out = a.num();
    if (b_out) *b_out = b;
    return true;
}

void poly::add_term(const monomial& m, const rational& c) {
    auto it = m_terms.find(m);
    if (it == m_terms.end()) {
        if (!c.is_zero()) m_terms[m] = c;
    } else {
        rational s = it->second + c;
        if (s.is_zero())
            m_terms.erase(it);
        else
            it->second = s;
    }
}

poly poly::operator+(const poly& o) const {
    poly r = *this;
    for (auto& [m, c] : o.m_terms) r.add_term(m, c);
    return r;
}

poly poly::operator-(const poly& o) const {
    poly r = *this;
    for (auto& [m, c] : o.m_terms) r.add_term(m, -c);
    return r;
}

poly poly::operator-() const {
    poly r;
    for (auto& [m, c] : m_terms) r.m_terms[m] = -c;
    return r;
}

poly poly::operator*(const poly& o) const {
    poly r;
    for (auto& [m1, c1] : m_terms)
        for (auto& [m2, c2] : o.m_terms) r.add_term(m1 * m2, c1 * c2);
    return r;
}

poly poly::scaled(const rational& c) const {
    poly r;
    if (c.is_zero()) return r;
    for (auto& [m, k] : m_terms) r.m_terms[m] = k * c;
    return r;
}

bool poly::operator<(const poly& o) const {
    auto i = m_terms.begin(), j = o.m_terms.begin();
    for (; i != m_terms.end() && j != o.m_terms.end(); ++i, ++j) {
        if (i->first < j->first) return true;
        if (j->first < i->first) return false;
        if (i->second != j->second) return i->second < j->second;
    }
    return i == m_terms.end() && j != o.m_terms.end();
}

rational poly::eval(const std::map<std::string, rational>& g) const {
    rational acc(0);
    for (auto& [m, c] : m_terms) {
        rational t = c;
        for (auto& [v, k] : m.pows) {
            auto it = g.find(v);
            if (it == g.end()) throw std::invalid_argument("unassigned variable: " + v);
            for (int i = 0; i < k; ++i) t = t * it->second;
        }
        acc = acc + t;
    }
    return acc;
}

poly poly::substitute(const std::map<std::string, poly>& theta) const {
    poly acc;
    for (auto& [m, c] : m_terms) {
        poly t(c);
        for (auto& [v, k] : m.pows) {
            auto it = theta.find(v);
            poly base = (it == theta.end()) ? poly::var(v) : it->second;
            for (int i = 0; i < k; ++i) t = t * base;
        }
        acc = acc + t;
    }
    return acc;
}

void poly::collect_vars(std::set<std::string>& out) const {
    for (auto& [m, c] : m_terms)
        for (auto& [v, k] : m.pows) out.insert(v);
}

std::set<std::string> poly::vars() const {
    std::set<std::string> s;
    collect_vars(s);
    return s;
}

// iteration order for printing: proper monomials first, the constant last
static std::vector<std::pair<monomial, rational>> print_order(
    const std::map<monomial, rational>& terms) {
    std::vector<std::pair<monomial, rational>> out;
    for (auto& t : terms)
        if (!t.first.pows.empty()) out.push_back(t);
    auto c = terms.find(monomial{});
    if (c != terms.end()) out.push_back(*c);
    return out;
}

expr poly::to_expr() const {
    if (m_terms.empty()) return expr::lit(0);
    expr acc;
    bool first = true;
    for (auto& [m, c] : print_order(m_terms)) {
        int64_t n = c.num() < 0 ? -c.num() : c.num();
        expr t = expr::lit(n);
        bool have = false;
        if (n == 1 && !m.pows.empty()) {
            // coefficient 1 is left implicit
        } else {
            have = true;
        }
        for (auto& [v, k] : m.pows) {
            for (int i = 0; i < k; ++i) {
                t = have ? expr::mul(t, expr::var(v)) : expr::var(v);
                have = true;
            }
        }
        if (c.den() != 1) t = expr::divk(t, c.den());
        if (first) {
            acc = c.num() < 0 ? expr::sub(expr::lit(0), t) : t;
            first = false;
        } else {
            acc = c.num() < 0 ? expr::sub(acc, t) : expr::add(acc, t);
        }
    }
    return acc;
}

std::string poly::to_string() const {
    if (m_terms.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto& [m, c] : print_order(m_terms)) {
        int64_t n = c.num() < 0 ? -c.num() : c.num();
        std::string t;
        std::string mono = m.to_string();
        if (mono.empty()) {
            t = std::to_string(n);
        } else if (n == 1) {
            t = mono;
        } else {
            t = std::to_string(n) + "*" + mono;
        }
        if (c.den() != 1) t += "/" + std::to_string(c.den());
        if (first) {
            s = (c.num() < 0 ? "0 - " : "") + t;
            first = false;
        } else {
            s += (c.num() < 0 ? " - " : " + ") + t;
        }
    }
    return s;
}

poly to_poly(const expr& e) {
    switch (e.kind()) {
    case expr_kind::lit: return poly(rational(e.lit_value()));
    case expr_kind::var: return poly::var(e.var_name());
    case expr_kind::neg: return -to_poly(e.arg0());
    case expr_kind::add: return to_poly(e.arg0()) + to_poly(e.arg1());
    case expr_kind::sub: return to_poly(e.arg0()) - to_poly(e.arg1());
    case expr_kind::mul: return to_poly(e.arg0()) * to_poly(e.arg1());
    case expr_kind::divk: return to_poly(e.arg0()).scaled(rational(1, e.divisor()));
    }
    throw std::logic_error("unreachable");
}

expr normalize_expr(const expr& e) {
    return to_poly(e).to_expr();
}

} // namespace dlp
