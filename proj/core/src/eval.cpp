#include "dlp/eval.hpp"

namespace dlp {

static rational eval_poly_at(const poly& p, const ground_world& w) {
    std::map<std::string, rational> rg;
    for (auto& v : p.vars()) {
        auto it = w.find(v);
        rg.emplace(v, rational(it == w.end() ? 0 : it->second));
    }
    return p.eval(rg);
}

bool eval_arith_formula(const ground_world& w, const formula& f) {
    switch (f.kind()) {
    case formula_kind::cmp:
        return cmp_holds(f.op(), eval_poly_at(to_poly(f.lhs()), w), eval_poly_at(to_poly(f.rhs()), w));
    case formula_kind::bool_lit: return f.bool_value();
    case formula_kind::neg: return !eval_arith_formula(w, f.arg0());
    case formula_kind::conj: return eval_arith_formula(w, f.arg0()) && eval_arith_formula(w, f.arg1());
    case formula_kind::disj: return eval_arith_formula(w, f.arg0()) || eval_arith_formula(w, f.arg1());
    case formula_kind::impl: return !eval_arith_formula(w, f.arg0()) || eval_arith_formula(w, f.arg1());
    default: throw unsupported_connective("not an arithmetic formula: " + f.to_string());
    }
}

bool eval_sl_formula(const store_heap& state, const formula& f) {
    switch (f.kind()) {
    case formula_kind::cmp:
        return cmp_holds(f.op(), eval_poly_at(to_poly(f.lhs()), state.vars),
                         eval_poly_at(to_poly(f.rhs()), state.vars));
    case formula_kind::bool_lit: return f.bool_value();
    case formula_kind::points_to: {
        rational a = eval_poly_at(to_poly(f.lhs()), state.vars);
        rational b = eval_poly_at(to_poly(f.rhs()), state.vars);
        if (!a.is_integer() || !b.is_integer()) return false;
        auto it = state.heap.find(a.num());
        return it != state.heap.end() && it->second == b.num();
    }
    case formula_kind::neg: return !eval_sl_formula(state, f.arg0());
    case formula_kind::conj: return eval_sl_formula(state, f.arg0()) && eval_sl_formula(state, f.arg1());
    case formula_kind::disj: return eval_sl_formula(state, f.arg0()) || eval_sl_formula(state, f.arg1());
    case formula_kind::impl: return !eval_sl_formula(state, f.arg0()) || eval_sl_formula(state, f.arg1());
    case formula_kind::sep: {
        std::vector<int64_t> addrs;
        for (auto& [a, v] : state.heap) addrs.push_back(a);
        size_t n = addrs.size();
        for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
            store_heap h1{state.vars, {}}, h2{state.vars, {}};
            for (size_t i = 0; i < n; ++i) {
                int64_t a = addrs[i];
                if (mask & (uint64_t(1) << i))
                    h1.heap[a] = state.heap.at(a);
                else
                    h2.heap[a] = state.heap.at(a);
            }
            if (eval_sl_formula(h1, f.arg0()) && eval_sl_formula(h2, f.arg1())) return true;
        }
        return false;
    }
    default: throw unsupported_connective("connective outside separation logic: " + f.to_string());
    }
}

bool eval_temporal(const std::vector<ground_world>& path, const formula& f) {
    if (path.empty()) throw std::invalid_argument("empty path");
    if (f.is_dynamic()) throw std::invalid_argument("dynamic formula in eval_temporal");
    switch (f.kind()) {
    case formula_kind::cmp:
    case formula_kind::bool_lit: return eval_arith_formula(path.front(), f);
    case formula_kind::tfirst: return eval_temporal({path.front()}, f.arg0());
    case formula_kind::suffix: {
        // exists a proper suffix tr' with tr' |= psi and every path strictly
        // between tr' and tr satisfying phi
        for (size_t k = 1; k < path.size(); ++k) {
            std::vector<ground_world> suf(path.begin() + k, path.end());
            if (!eval_temporal(suf, f.arg1())) continue;
            bool between_ok = true;
            for (size_t j = 1; j < k; ++j) {
                std::vector<ground_world> mid(path.begin() + j, path.end());
                if (!eval_temporal(mid, f.arg0())) {
                    between_ok = false;
                    break;
                }
            }
            if (between_ok) return true;
        }
        return false;
    }
    case formula_kind::neg: return !eval_temporal(path, f.arg0());
    case formula_kind::conj: return eval_temporal(path, f.arg0()) && eval_temporal(path, f.arg1());
    case formula_kind::disj: return eval_temporal(path, f.arg0()) || eval_temporal(path, f.arg1());
    case formula_kind::impl: return !eval_temporal(path, f.arg0()) || eval_temporal(path, f.arg1());
    default: throw unsupported_connective("connective outside process logic: " + f.to_string());
    }
}

std::vector<ground_world> ground_path(const store_seq& seq, const ground_world& g) {
    std::vector<ground_world> path;
    for (auto& s : seq.elems) path.push_back(s.ground(g));
    return path;
}

} // namespace dlp
