#include "dlp/label.hpp"
#include "dlp/eval.hpp"

#include <algorithm>
#include <sstream>

namespace dlp {

store::store(std::vector<std::pair<std::string, poly>> entries) : m_entries(std::move(entries)) {
    std::sort(m_entries.begin(), m_entries.end(),
              [](auto& a, auto& b) { return a.first < b.first; });
    for (size_t i = 0; i + 1 < m_entries.size(); ++i)
        if (m_entries[i].first == m_entries[i + 1].first)
            throw std::invalid_argument("duplicate store variable: " + m_entries[i].first);
    for (auto& [x, e] : m_entries) {
        for (auto& v : e.vars())
            if (maps(v))
                throw variable_capture("stored expression mentions mapped variable: " + v);
        (void)x;
    }
}

const poly* store::find(const std::string& x) const {
    for (auto& [v, e] : m_entries)
        if (v == x) return &e;
    return nullptr;
}

std::set<std::string> store::domain() const {
    std::set<std::string> s;
    for (auto& [v, e] : m_entries) s.insert(v);
    return s;
}

std::set<std::string> store::value_vars() const {
    std::set<std::string> s;
    for (auto& [v, e] : m_entries) e.collect_vars(s);
    return s;
}

poly store::apply(const poly& e) const {
    std::map<std::string, poly> theta;
    for (auto& [v, p] : m_entries) theta[v] = p;
    return e.substitute(theta);
}

store store::update(const std::string& x, const poly& e) const {
    poly v = apply(e);
    std::vector<std::pair<std::string, poly>> entries;
    bool seen = false;
    for (auto& [y, p] : m_entries) {
        if (y == x) {
            entries.emplace_back(y, v);
            seen = true;
        } else {
            entries.emplace_back(y, p);
        }
    }
    if (!seen) entries.emplace_back(x, v);
    return store(std::move(entries));
}

store store::substitute(const std::map<std::string, poly>& theta) const {
    std::vector<std::pair<std::string, poly>> entries;
    for (auto& [x, e] : m_entries) entries.emplace_back(x, e.substitute(theta));
    return store(std::move(entries));
}

std::map<std::string, int64_t> store::ground(const std::map<std::string, int64_t>& g) const {
    std::map<std::string, rational> rg;
    for (auto& [k, v] : g) rg.emplace(k, rational(v));
    std::map<std::string, int64_t> w;
    for (auto& [x, e] : m_entries) w[x] = e.eval(rg).to_int();
    return w;
}

bool store::is_ground() const {
    for (auto& [x, e] : m_entries)
        if (!e.is_constant() || !e.constant_value().is_integer()) return false;
    return true;
}

std::string store::to_string() const {
    std::string s = "{";
    bool first = true;
    for (auto& [x, e] : m_entries) {
        if (!first) s += ", ";
        s += x + " -> " + e.to_string();
        first = false;
    }
    return s + "}";
}

std::string store_seq::to_string() const {
    std::string s;
    for (size_t i = 0; i < elems.size(); ++i) {
        if (i) s += " . ";
        s += elems[i].to_string();
    }
    return s;
}

std::string store_heap::to_string() const {
    std::string s = "({";
    bool first = true;
    for (auto& [x, v] : vars) {
        if (!first) s += ", ";
        s += x + " -> " + std::to_string(v);
        first = false;
    }
    s += "}, {";
    first = true;
    for (auto& [a, v] : heap) {
        if (!first) s += ", ";
        s += std::to_string(a) + " -> " + std::to_string(v);
        first = false;
    }
    return s + "})";
}

label::label(store_seq s) : m_v(std::move(s)) {
    if (std::get<store_seq>(m_v).elems.empty())
        throw std::invalid_argument("empty store sequence");
}

label label::substitute(const std::map<std::string, poly>& theta) const {
    if (is_store()) return label(as_store().substitute(theta));
    if (is_seq()) {
        store_seq r;
        for (auto& s : as_seq().elems) r.elems.push_back(s.substitute(theta));
        return label(std::move(r));
    }
    return *this; // ground store-heap pairs have no free variables
}

std::set<std::string> label::free_vars() const {
    std::set<std::string> s;
    if (is_store()) {
        s = as_store().value_vars();
    } else if (is_seq()) {
        for (auto& st : as_seq().elems) {
            auto v = st.value_vars();
            s.insert(v.begin(), v.end());
        }
    }
    return s;
}

std::string label::to_string() const {
    if (is_store()) return as_store().to_string();
    if (is_seq()) return as_seq().to_string();
    return as_heap().to_string();
}

// ---------------------------------------------------------------------------

static formula apply_store(const store& s, const formula& f) {
    std::map<std::string, poly> theta;
    for (auto& [v, p] : s.entries()) theta[v] = p;
    return f.substitute(theta).normalized();
}

formula apply_label(const label& l, const formula& f) {
    if (f.is_dynamic()) throw unsupported_connective("cannot apply a label to a dynamic formula");
    if (l.is_store()) {
        if (f.is_temporal())
            throw unsupported_connective("temporal formula under a plain store label");
        if (f.is_spatial())
            throw unsupported_connective("spatial formula under a plain store label");
        return apply_store(l.as_store(), f);
    }
    if (l.is_seq()) {
        if (f.is_spatial())
            throw unsupported_connective("spatial formula under a store-sequence label");
        if (f.is_temporal())
            throw unsupported_connective("temporal formula cannot be grounded by substitution");
        // Non-temporal path formulas hold at the head world of the path.
        return apply_store(l.as_seq().head(), f);
    }
    if (f.is_temporal())
        throw unsupported_connective("temporal formula under a store-heap label");
    return formula::bool_lit(eval_sl_formula(l.as_heap(), f));
}

void fresh_supply::avoid(const std::set<std::string>& more) {
    m_avoid.insert(more.begin(), more.end());
}

std::string fresh_supply::next() {
    for (;;) {
        std::string name = "_g" + std::to_string(++m_counter);
        if (!m_avoid.count(name)) {
            m_avoid.insert(name);
            return name;
        }
    }
}

} // namespace dlp
