#include "dlp/sequent.hpp"

#include <algorithm>
#include <sstream>

namespace dlp {

const poly* substitution::find(const std::string& x) const {
    auto it = m_map.find(x);
    return it == m_map.end() ? nullptr : &it->second;
}

substitution substitution::compose(const substitution& inner) const {
    // result(x) = this(inner(x)) for x in dom(inner); this(x) elsewhere.
    std::map<std::string, poly> r;
    for (auto& [x, e] : inner.m_map) r[x] = e.substitute(m_map);
    for (auto& [x, e] : m_map)
        if (!r.count(x)) r[x] = e;
    return substitution(std::move(r));
}

std::string substitution::to_string() const {
    std::string s = "[";
    bool first = true;
    for (auto& [x, e] : m_map) {
        if (!first) s += ", ";
        s += e.to_string() + "/" + x;
        first = false;
    }
    return s + "]";
}

labeled_formula labeled_formula::labeled(label l, formula f) {
    labeled_formula r;
    r.m_kind = labeled_kind::labeled;
    r.m_l1 = std::move(l);
    r.m_f = std::move(f);
    return r;
}

labeled_formula labeled_formula::transition(program a, label l, program a2, label l2) {
    if (a.is_ter()) throw std::invalid_argument("transition source is the terminal program");
    labeled_formula r;
    r.m_kind = labeled_kind::transition;
    r.m_p1 = std::move(a);
    r.m_l1 = std::move(l);
    r.m_p2 = std::move(a2);
    r.m_l2 = std::move(l2);
    return r;
}

labeled_formula labeled_formula::termination(label l, program a) {
    labeled_formula r;
    r.m_kind = labeled_kind::termination;
    r.m_l1 = std::move(l);
    r.m_p1 = std::move(a);
    return r;
}

labeled_formula labeled_formula::normalized() const {
    labeled_formula r = *this;
    switch (m_kind) {
    case labeled_kind::labeled:
        r.m_f = m_f.normalized();
        r.m_l1 = m_l1.substitute({});
        break;
    case labeled_kind::transition:
        r.m_p1 = m_p1.normalized();
        r.m_p2 = m_p2.normalized();
        r.m_l1 = m_l1.substitute({});
        r.m_l2 = m_l2.substitute({});
        break;
    case labeled_kind::termination:
        r.m_p1 = m_p1.normalized();
        r.m_l1 = m_l1.substitute({});
        break;
    }
    return r;
}

static std::map<std::string, poly> restrict_away(const std::map<std::string, poly>& theta,
                                                 const label& l) {
    if (!l.is_store() && !l.is_seq()) return theta;
    std::set<std::string> captured;
    if (l.is_store()) {
        captured = l.as_store().domain();
    } else {
        for (auto& st : l.as_seq().elems) {
            auto d = st.domain();
            captured.insert(d.begin(), d.end());
        }
    }
    std::map<std::string, poly> r;
    for (auto& [x, e] : theta)
        if (!captured.count(x)) r.emplace(x, e);
    return r;
}

labeled_formula labeled_formula::substitute(const substitution& theta) const {
    labeled_formula r = *this;
    const auto& m = theta.mapping();
    switch (m_kind) {
    case labeled_kind::labeled: {
        r.m_l1 = m_l1.substitute(m);
        r.m_f = m_f.substitute(restrict_away(m, m_l1));
        break;
    }
    case labeled_kind::transition:
        r.m_l1 = m_l1.substitute(m);
        r.m_l2 = m_l2.substitute(m);
        break;
    case labeled_kind::termination: r.m_l1 = m_l1.substitute(m); break;
    }
    return r;
}

std::set<std::string> labeled_formula::free_vars() const {
    std::set<std::string> s = m_l1.free_vars();
    switch (m_kind) {
    case labeled_kind::labeled: {
        std::set<std::string> fv = m_f.vars();
        std::set<std::string> captured;
        if (m_l1.is_store()) captured = m_l1.as_store().domain();
        for (auto& v : fv)
            if (!captured.count(v)) s.insert(v);
        break;
    }
    case labeled_kind::transition: {
        auto s2 = m_l2.free_vars();
        s.insert(s2.begin(), s2.end());
        break;
    }
    case labeled_kind::termination: break;
    }
    return s;
}

bool labeled_formula::operator==(const labeled_formula& o) const {
    if (m_kind != o.m_kind) return false;
    switch (m_kind) {
    case labeled_kind::labeled: return m_l1 == o.m_l1 && m_f == o.m_f;
    case labeled_kind::transition:
        return m_l1 == o.m_l1 && m_l2 == o.m_l2 && m_p1 == o.m_p1 && m_p2 == o.m_p2;
    case labeled_kind::termination: return m_l1 == o.m_l1 && m_p1 == o.m_p1;
    }
    return false;
}

std::string labeled_formula::to_string() const {
    switch (m_kind) {
    case labeled_kind::labeled: return m_l1.to_string() + " : " + m_f.to_string();
    case labeled_kind::transition:
        return "(" + m_p1.to_string() + ", " + m_l1.to_string() + ") -> (" + m_p2.to_string() +
               ", " + m_l2.to_string() + ")";
    case labeled_kind::termination: return m_l1.to_string() + " |v " + m_p1.to_string();
    }
    return "";
}

sequent sequent::normalized() const {
    sequent r;
    for (auto& f : left) r.left.push_back(f.normalized());
    for (auto& f : right) r.right.push_back(f.normalized());
    return r;
}

sequent sequent::substitute(const substitution& theta) const {
    sequent r;
    for (auto& f : left) r.left.push_back(f.substitute(theta));
    for (auto& f : right) r.right.push_back(f.substitute(theta));
    return r;
}

std::set<std::string> sequent::free_vars() const {
    std::set<std::string> s;
    for (auto& f : left) {
        auto v = f.free_vars();
        s.insert(v.begin(), v.end());
    }
    for (auto& f : right) {
        auto v = f.free_vars();
        s.insert(v.begin(), v.end());
    }
    return s;
}

static std::vector<std::string> sorted_prints(const std::vector<labeled_formula>& fs) {
    std::vector<std::string> v;
    for (auto& f : fs) v.push_back(f.normalized().to_string());
    std::sort(v.begin(), v.end());
    return v;
}

bool sequent::same_as(const sequent& o) const {
    return sorted_prints(left) == sorted_prints(o.left) &&
           sorted_prints(right) == sorted_prints(o.right);
}

std::string sequent::to_string() const {
    std::string s;
    for (size_t i = 0; i < left.size(); ++i) {
        if (i) s += ", ";
        s += left[i].to_string();
    }
    s += left.empty() ? "|-" : " |-";
    for (size_t i = 0; i < right.size(); ++i) {
        s += i ? ", " : " ";
        s += right[i].to_string();
    }
    return s;
}

// ---------------------------------------------------------------------------
// One-sided matching. Heuristic solving (bare variables, then single-unknown
// affine entries, preferring unknowns absent from the target), always
// finished by an authoritative substitute-and-compare verification.
// ---------------------------------------------------------------------------

namespace {

struct match_state {
    substitution theta;
    std::set<std::string> target_vars;

    bool try_solve(const poly& tmpl, const poly& target) {
        poly t = tmpl.substitute(theta.mapping());
        if (t == target) return true;
        std::string v;
        if (t.is_variable(&v)) {
            theta.set(v, target);
            return true;
        }
        // a*v + rest == target, one unknown v preferably absent from target
        poly diff = t - target;
        std::set<std::string> candidates = t.vars();
        std::vector<std::string> ordered;
        for (auto& c : candidates)
            if (!target_vars.count(c)) ordered.push_back(c);
        for (auto& c : candidates)
            if (target_vars.count(c)) ordered.push_back(c);
        for (auto& v2 : ordered) {
            // t = a*v2 + r with v2 not occurring in a or r
            rational a;
            poly r;
            bool linear = true;
            for (auto& [m, c] : t.terms()) {
                int deg = 0;
                monomial rest;
                for (auto& [var, k] : m.pows) {
                    if (var == v2)
                        deg = k;
                    else
                        rest.pows.emplace_back(var, k);
                }
                if (deg == 0) {
                    r = r + poly(c) * [&] {
                        poly p(rational(1));
                        for (auto& [var, k] : rest.pows)
                            for (int i = 0; i < k; ++i) p = p * poly::var(var);
                        return p;
                    }();
                } else if (deg == 1 && rest.pows.empty()) {
                    a = a + c;
                } else {
                    linear = false;
                    break;
                }
            }
            if (!linear || a.is_zero()) continue;
            // v2 := (target - r) / a
            poly sol = (target - r).scaled(rational(1) / a);
            theta.set(v2, sol);
            return true;
        }
        return false;
    }
};

} // namespace

std::optional<substitution> match_label(const store& template_, const store& target) {
    sequent a, b;
    a.left.push_back(labeled_formula::labeled(label(template_), formula::bool_lit(true)));
    b.left.push_back(labeled_formula::labeled(label(target), formula::bool_lit(true)));
    return match_label(a, b);
}

static void collect_pairs(const sequent& template_, const sequent& target,
                          std::vector<std::pair<poly, poly>>& pairs, bool& shape_ok) {
    shape_ok = template_.left.size() == target.left.size() &&
               template_.right.size() == target.right.size();
    if (!shape_ok) return;
    auto side = [&](const std::vector<labeled_formula>& ts, const std::vector<labeled_formula>& gs) {
        for (size_t i = 0; i < ts.size(); ++i) {
            const label& lt = ts[i].lab();
            const label& lg = gs[i].lab();
            if (lt.is_store() && lg.is_store()) {
                for (auto& [x, e] : lt.as_store().entries()) {
                    const poly* ge = lg.as_store().find(x);
                    if (ge) pairs.emplace_back(e, *ge);
                }
            } else if (lt.is_seq() && lg.is_seq() &&
                       lt.as_seq().elems.size() == lg.as_seq().elems.size()) {
                for (size_t j = 0; j < lt.as_seq().elems.size(); ++j)
                    for (auto& [x, e] : lt.as_seq().elems[j].entries()) {
                        const poly* ge = lg.as_seq().elems[j].find(x);
                        if (ge) pairs.emplace_back(e, *ge);
                    }
            }
        }
    };
    side(template_.left, target.left);
    side(template_.right, target.right);
}

std::optional<substitution> match_label(const sequent& template_, const sequent& target) {
    std::vector<std::pair<poly, poly>> pairs;
    bool shape_ok = false;
    collect_pairs(template_, target, pairs, shape_ok);
    if (!shape_ok) return std::nullopt;

    match_state st;
    for (auto& v : target.free_vars()) st.target_vars.insert(v);

    // fixpoint over entry equations, easiest first
    bool progress = true;
    std::vector<bool> solved(pairs.size(), false);
    while (progress) {
        progress = false;
        for (size_t i = 0; i < pairs.size(); ++i) {
            if (solved[i]) continue;
            poly inst = pairs[i].first.substitute(st.theta.mapping());
            if (inst == pairs[i].second) {
                solved[i] = true;
                progress = true;
                continue;
            }
            if (st.try_solve(pairs[i].first, pairs[i].second)) {
                solved[i] = true;
                progress = true;
            }
        }
    }

    sequent check = template_.substitute(st.theta);
    if (!check.same_as(target)) return std::nullopt;
    return st.theta;
}

anti_unify_result anti_unify(const store& s1, const store& s2, fresh_supply& fresh) {
    if (s1.domain() != s2.domain())
        throw std::invalid_argument("anti_unify requires equal variable sets");
    fresh.avoid(s1.value_vars());
    fresh.avoid(s2.value_vars());
    std::vector<std::pair<std::string, poly>> entries;
    std::map<std::pair<std::string, std::string>, std::string> seen;
    substitution t1, t2;
    for (auto& [x, e1] : s1.entries()) {
        const poly& e2 = *s2.find(x);
        if (e1 == e2) {
            entries.emplace_back(x, e1);
            continue;
        }
        auto key = std::make_pair(e1.to_string(), e2.to_string());
        auto it = seen.find(key);
        std::string u;
        if (it != seen.end()) {
            u = it->second;
        } else {
            u = fresh.next();
            seen[key] = u;
            t1.set(u, e1);
            t2.set(u, e2);
        }
        entries.emplace_back(x, poly::var(u));
    }
    return anti_unify_result{store(std::move(entries)), std::move(t1), std::move(t2)};
}

bool is_free_label(const store& s, const std::vector<formula>& a) {
    std::set<std::string> avoid;
    for (auto& f : a) f.collect_vars(avoid);
    std::set<std::string> used;
    for (auto& [x, e] : s.entries()) {
        std::string t;
        int64_t coeff;
        rational b;
        if (!e.is_unit_affine(&t, &coeff, &b)) return false;
        if (avoid.count(t)) return false;
        if (!used.insert(t).second) return false; // fresh variables must be distinct
    }
    return true;
}

} // namespace dlp
