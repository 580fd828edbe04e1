#pragma once

#include "dlp/formula.hpp"
#include "dlp/program.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace dlp {

struct variable_capture : std::runtime_error {
    explicit variable_capture(const std::string& what) : std::runtime_error(what) {}
};

struct unsupported_connective : std::runtime_error {
    explicit unsupported_connective(const std::string& what) : std::runtime_error(what) {}
};

// Variable store {x1 -> e1, ..., xn -> en}. Mapped variables are pairwise
// distinct and may not occur free in any stored expression; stored
// expressions are kept in polynomial normal form.
class store {
public:
    store() {}
    explicit store(std::vector<std::pair<std::string, poly>> entries); // validates

    bool empty() const { return m_entries.empty(); }
    size_t size() const { return m_entries.size(); }
    const std::vector<std::pair<std::string, poly>>& entries() const { return m_entries; }
    const poly* find(const std::string& x) const;
    bool maps(const std::string& x) const { return find(x) != nullptr; }
    std::set<std::string> domain() const;
    std::set<std::string> value_vars() const;

    // sigma(e): replaces mapped variables of e by their stored expressions.
    poly apply(const poly& e) const;

    // sigma^x_e: stores x as normalize(sigma(e)), other entries unchanged.
    store update(const std::string& x, const poly& e) const;

    store substitute(const std::map<std::string, poly>& theta) const;

    // Ground instance at g (integer values); throws non_integral_division if
    // a stored value is not an integer at g.
    std::map<std::string, int64_t> ground(const std::map<std::string, int64_t>& g) const;

    bool is_ground() const;

    bool operator==(const store& o) const { return m_entries == o.m_entries; }
    bool operator!=(const store& o) const { return !(*this == o); }
    bool operator<(const store& o) const { return m_entries < o.m_entries; }

    std::string to_string() const;

private:
    // sorted by variable name
    std::vector<std::pair<std::string, poly>> m_entries;
};

// Nonempty sequence of stores (process logic); grows at the tail, the head is
// the start of the recorded path.
struct store_seq {
    std::vector<store> elems;

    const store& head() const { return elems.front(); }
    const store& tail_store() const { return elems.back(); }

    bool operator==(const store_seq& o) const { return elems == o.elems; }
    bool operator<(const store_seq& o) const { return elems < o.elems; }
    std::string to_string() const;
};

// Ground store plus ground heap (separation logic). Heap addresses are
// positive.
struct store_heap {
    std::map<std::string, int64_t> vars;
    std::map<int64_t, int64_t> heap;

    bool operator==(const store_heap& o) const { return vars == o.vars && heap == o.heap; }
    bool operator<(const store_heap& o) const {
        return vars < o.vars || (vars == o.vars && heap < o.heap);
    }
    std::string to_string() const;
};

class label {
public:
    label() : m_v(store{}) {}
    label(store s) : m_v(std::move(s)) {}
    label(store_seq s);
    label(store_heap s) : m_v(std::move(s)) {}

    bool is_store() const { return std::holds_alternative<store>(m_v); }
    bool is_seq() const { return std::holds_alternative<store_seq>(m_v); }
    bool is_heap() const { return std::holds_alternative<store_heap>(m_v); }

    const store& as_store() const { return std::get<store>(m_v); }
    const store_seq& as_seq() const { return std::get<store_seq>(m_v); }
    const store_heap& as_heap() const { return std::get<store_heap>(m_v); }

    label substitute(const std::map<std::string, poly>& theta) const;
    std::set<std::string> free_vars() const;

    bool operator==(const label& o) const { return m_v == o.m_v; }
    bool operator!=(const label& o) const { return !(*this == o); }
    bool operator<(const label& o) const { return m_v < o.m_v; }

    std::string to_string() const;

private:
    std::variant<store, store_seq, store_heap> m_v;
};

// Applies a label to a non-dynamic formula. Stores substitute their entries;
// store sequences act through their head store (path formulas hold at the
// start of the recorded path); ground store-heap pairs additionally resolve
// points-to atoms and ** against the heap, producing a boolean constant.
formula apply_label(const label& l, const formula& f);

// Fresh-name supply over a reserved lexical namespace (identifiers starting
// with '_' are rejected by the parser).
class fresh_supply {
public:
    explicit fresh_supply(std::set<std::string> avoid = {}) : m_avoid(std::move(avoid)) {}
    void avoid(const std::set<std::string>& more);
    std::string next();

private:
    std::set<std::string> m_avoid;
    uint64_t m_counter = 0;
};

} // namespace dlp
