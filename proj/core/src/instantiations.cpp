#include "dlp/instantiations.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

namespace dlp {

termination_certificate termination_certificate::unroll(int64_t k) {
    if (k < 1) throw std::invalid_argument("unroll bound must be >= 1");
    termination_certificate c;
    c.k = kind::unroll;
    c.bound = k;
    return c;
}

termination_certificate termination_certificate::variant(poly v) {
    termination_certificate c;
    c.k = kind::variant;
    c.variant_expr = std::move(v);
    return c;
}

std::string termination_certificate::to_string() const {
    if (k == kind::unroll) return "unroll " + std::to_string(bound);
    return "variant " + variant_expr.to_string();
}

// ---------------------------------------------------------------------------
// Symbolic step
// ---------------------------------------------------------------------------

namespace {

label updated_label(inst_id inst, const label& sigma, const std::string& x, const poly& e) {
    if (inst == inst_id::pl) {
        // assignment appends the updated tail store to the sequence
        store_seq seq;
        if (sigma.is_store())
            seq.elems.push_back(sigma.as_store());
        else
            seq = sigma.as_seq();
        seq.elems.push_back(seq.elems.back().update(x, e));
        return label(std::move(seq));
    }
    return label(sigma.as_store().update(x, e));
}

// PL guards act on the last (current) store of the sequence.
label guard_label(inst_id inst, const label& sigma) {
    if (inst == inst_id::pl && sigma.is_seq()) return label(sigma.as_seq().tail_store());
    return sigma;
}

void require_kind(const pack_context& ctx, const label& sigma) {
    switch (ctx.inst) {
    case inst_id::wp:
    case inst_id::fodl:
        if (!sigma.is_store()) throw kind_mismatch("wp/fodl labels are stores");
        return;
    case inst_id::pl:
        if (sigma.is_heap()) throw kind_mismatch("pl labels are store sequences");
        return;
    case inst_id::sl:
        if (!sigma.is_heap()) throw kind_mismatch("sl labels are ground store-heap pairs");
        return;
    }
}

void append_guarded(step_result& out, const step_result& inner,
                    const std::function<std::pair<program, std::string>(const program&)>& wrap,
                    const label* lab_override, const std::vector<labeled_formula>& extra_guards) {
    for (auto& s : inner.successors) {
        auto [prog, tag] = wrap(s.prog);
        step_successor ns;
        ns.prog = std::move(prog);
        ns.lab = lab_override ? *lab_override : s.lab;
        ns.guards = s.guards;
        ns.guards.insert(ns.guards.end(), extra_guards.begin(), extra_guards.end());
        ns.rule_tag = tag;
        out.successors.push_back(std::move(ns));
    }
    if (!inner.exhaustive) {
        out.exhaustive = false;
        if (!out.undecided_guard && inner.undecided_guard) {
            out.undecided_guard = inner.undecided_guard;
            out.undecided_label = inner.undecided_label;
        }
    }
}

step_result step_sl(const pack_context& ctx, const program& alpha, const store_heap& sh) {
    step_result r;
    auto value_of = [&](const expr& e) -> std::optional<int64_t> {
        std::map<std::string, rational> rg;
        poly p = to_poly(e);
        for (auto& v : p.vars()) {
            auto it = sh.vars.find(v);
            rg.emplace(v, rational(it == sh.vars.end() ? 0 : it->second));
        }
        rational val = p.eval(rg);
        if (!val.is_integer()) return std::nullopt;
        return val.num();
    };
    switch (alpha.kind()) {
    case program_kind::alloc: {
        auto val = value_of(alpha.e0());
        if (!val) return r;
        int64_t n = ctx.alloc_base;
        while (sh.heap.count(n)) ++n;
        store_heap next = sh;
        next.vars[alpha.var()] = n;
        next.heap[n] = *val;
        r.successors.push_back({program::ter(), label(next), {}, "cons"});
        return r;
    }
    case program_kind::load: {
        auto addr = value_of(alpha.e0());
        if (!addr || !sh.heap.count(*addr)) return r; // memory fault: stuck
        store_heap next = sh;
        next.vars[alpha.var()] = sh.heap.at(*addr);
        r.successors.push_back({program::ter(), label(next), {}, "load"});
        return r;
    }
    case program_kind::store_to: {
        auto addr = value_of(alpha.e0());
        auto val = value_of(alpha.e1());
        if (!addr || !val || !sh.heap.count(*addr)) return r;
        store_heap next = sh;
        next.heap[*addr] = *val;
        r.successors.push_back({program::ter(), label(next), {}, "mutate"});
        return r;
    }
    case program_kind::dispose: {
        auto addr = value_of(alpha.e0());
        if (!addr) return r;
        store_heap next = sh;
        next.heap.erase(*addr);
        r.successors.push_back({program::ter(), label(next), {}, "dispose"});
        return r;
    }
    case program_kind::seq: {
        step_result inner = step_sl(ctx, alpha.p0(), sh);
        step_result out;
        append_guarded(out, inner,
                       [&](const program& p) -> std::pair<program, std::string> {
                           if (p.is_ter()) return {alpha.p1(), ";ter"};
                           return {program::seq(p, alpha.p1()), ";"};
                       },
                       nullptr, {});
        return out;
    }
    default: throw kind_mismatch("statement outside the sl pack: " + alpha.to_string());
    }
}

} // namespace

step_result step(const pack_context& ctx, const std::vector<labeled_formula>& gamma,
                 const program& alpha, const label& sigma) {
    if (alpha.is_ter()) throw std::invalid_argument("no transitions from ter");
    require_kind(ctx, sigma);
    if (ctx.inst == inst_id::sl) return step_sl(ctx, alpha, sigma.as_heap());

    step_result r;
    switch (alpha.kind()) {
    case program_kind::assign: {
        label next = updated_label(ctx.inst, sigma, alpha.var(), to_poly(alpha.e0()));
        r.successors.push_back({program::ter(), std::move(next), {}, "assign"});
        return r;
    }
    case program_kind::seq: {
        step_result inner = step(ctx, gamma, alpha.p0(), sigma);
        step_result out;
        append_guarded(out, inner,
                       [&](const program& p) -> std::pair<program, std::string> {
                           if (p.is_ter()) return {alpha.p1(), ";ter"};
                           return {program::seq(p, alpha.p1()), ";"};
                       },
                       nullptr, {});
        return out;
    }
    case program_kind::ifte: {
        if (ctx.inst != inst_id::wp) throw kind_mismatch("if-then-else outside wp");
        label gl = guard_label(ctx.inst, sigma);
        tri d = decide_guard(gamma, gl, alpha.cond(), ctx.oracle);
        if (d == tri::unknown) {
            r.exhaustive = false;
            r.undecided_guard = alpha.cond();
            r.undecided_label = gl;
            return r;
        }
        bool then_branch = d == tri::yes;
        formula cond = then_branch ? alpha.cond() : formula::neg(alpha.cond());
        step_result inner = step(ctx, gamma, then_branch ? alpha.p0() : alpha.p1(), sigma);
        step_result out;
        append_guarded(out, inner,
                       [&](const program& p) -> std::pair<program, std::string> {
                           return {p, then_branch ? "ite1" : "ite2"};
                       },
                       nullptr, {labeled_formula::labeled(gl, cond)});
        return out;
    }
    case program_kind::loop: {
        if (ctx.inst != inst_id::wp) throw kind_mismatch("while outside wp");
        label gl = guard_label(ctx.inst, sigma);
        tri d = decide_guard(gamma, gl, alpha.cond(), ctx.oracle);
        if (d == tri::unknown) {
            r.exhaustive = false;
            r.undecided_guard = alpha.cond();
            r.undecided_label = gl;
            return r;
        }
        if (d == tri::no) {
            r.successors.push_back(
                {program::ter(), sigma,
                 {labeled_formula::labeled(gl, formula::neg(alpha.cond()))},
                 "wh2"});
            return r;
        }
        step_result inner = step(ctx, gamma, alpha.p0(), sigma);
        step_result out;
        append_guarded(out, inner,
                       [&](const program& p) -> std::pair<program, std::string> {
                           if (p.is_ter()) return {alpha, "wh1ter"};
                           return {program::seq(p, alpha), "wh1"};
                       },
                       nullptr, {labeled_formula::labeled(gl, alpha.cond())});
        return out;
    }
    case program_kind::test: {
        if (ctx.inst == inst_id::wp) throw kind_mismatch("tests outside regular programs");
        label gl = guard_label(ctx.inst, sigma);
        tri d = decide_guard(gamma, gl, alpha.cond(), ctx.oracle);
        if (d == tri::unknown) {
            r.exhaustive = false;
            r.undecided_guard = alpha.cond();
            r.undecided_label = gl;
            return r;
        }
        if (d == tri::yes)
            r.successors.push_back(
                {program::ter(), sigma, {labeled_formula::labeled(gl, alpha.cond())}, "?"});
        // refuted test: no transition
        return r;
    }
    case program_kind::choice:
        if (ctx.inst == inst_id::wp) throw kind_mismatch("choice outside regular programs");
        r.successors.push_back({alpha.p0(), sigma, {}, "+1"});
        r.successors.push_back({alpha.p1(), sigma, {}, "+2"});
        return r;
    case program_kind::star: {
        if (ctx.inst == inst_id::wp) throw kind_mismatch("star outside regular programs");
        program unfold =
            program::choice(program::seq(alpha.p0(), alpha), program::test(formula::bool_lit(true)));
        r.successors.push_back({std::move(unfold), sigma, {}, "*"});
        return r;
    }
    default: throw kind_mismatch("statement outside this pack: " + alpha.to_string());
    }
}

// ---------------------------------------------------------------------------
// Concrete interpreters
// ---------------------------------------------------------------------------

world::world(pl_world w) : m_v(std::move(w)) {
    if (std::get<pl_world>(m_v).path.empty())
        throw std::invalid_argument("pl worlds are nonempty paths");
}

std::string world::to_string() const {
    std::ostringstream os;
    if (is_map()) {
        os << "{";
        bool first = true;
        for (auto& [x, v] : as_map()) {
            if (!first) os << ", ";
            os << x << " -> " << v;
            first = false;
        }
        os << "}";
    } else if (is_path()) {
        bool first = true;
        for (auto& w : as_path().path) {
            if (!first) os << " . ";
            first = false;
            os << world(w).to_string();
        }
    } else {
        os << as_heap().to_string();
    }
    return os.str();
}

namespace {

int64_t eval_int(const expr& e, const ground_world& w) {
    poly p = to_poly(e);
    std::map<std::string, rational> rg;
    for (auto& v : p.vars()) {
        auto it = w.find(v);
        rg.emplace(v, rational(it == w.end() ? 0 : it->second));
    }
    return p.eval(rg).to_int();
}

std::vector<std::pair<program, world>> one_step_map(const pack_context& ctx, const program& alpha,
                                                    const ground_world& w) {
    std::vector<std::pair<program, world>> out;
    switch (alpha.kind()) {
    case program_kind::assign: {
        ground_world next = w;
        next[alpha.var()] = eval_int(alpha.e0(), w);
        out.emplace_back(program::ter(), world(std::move(next)));
        return out;
    }
    case program_kind::seq:
        for (auto& [p, w2] : one_step_map(ctx, alpha.p0(), w)) {
            if (p.is_ter())
                out.emplace_back(alpha.p1(), w2);
            else
                out.emplace_back(program::seq(p, alpha.p1()), w2);
        }
        return out;
    case program_kind::ifte: {
        const program& branch = eval_arith_formula(w, alpha.cond()) ? alpha.p0() : alpha.p1();
        return one_step_map(ctx, branch, w);
    }
    case program_kind::loop:
        if (!eval_arith_formula(w, alpha.cond())) {
            out.emplace_back(program::ter(), world(w));
            return out;
        }
        for (auto& [p, w2] : one_step_map(ctx, alpha.p0(), w)) {
            if (p.is_ter())
                out.emplace_back(alpha, w2);
            else
                out.emplace_back(program::seq(p, alpha), w2);
        }
        return out;
    case program_kind::test:
        if (eval_arith_formula(w, alpha.cond())) out.emplace_back(program::ter(), world(w));
        return out;
    case program_kind::choice:
        out.emplace_back(alpha.p0(), world(w));
        out.emplace_back(alpha.p1(), world(w));
        return out;
    case program_kind::star:
        out.emplace_back(
            program::choice(program::seq(alpha.p0(), alpha), program::test(formula::bool_lit(true))),
            world(w));
        return out;
    default: throw kind_mismatch("statement outside this pack: " + alpha.to_string());
    }
}

std::vector<std::pair<program, world>> one_step_path(const pack_context& ctx, const program& alpha,
                                                     const pl_world& w) {
    std::vector<std::pair<program, world>> out;
    const ground_world& cur = w.path.back();
    switch (alpha.kind()) {
    case program_kind::assign: {
        pl_world next = w;
        ground_world tail = cur;
        tail[alpha.var()] = eval_int(alpha.e0(), cur);
        next.path.push_back(std::move(tail));
        out.emplace_back(program::ter(), world(std::move(next)));
        return out;
    }
    case program_kind::seq:
        for (auto& [p, w2] : one_step_path(ctx, alpha.p0(), w)) {
            if (p.is_ter())
                out.emplace_back(alpha.p1(), w2);
            else
                out.emplace_back(program::seq(p, alpha.p1()), w2);
        }
        return out;
    case program_kind::test:
        if (eval_arith_formula(cur, alpha.cond())) out.emplace_back(program::ter(), world(w));
        return out;
    case program_kind::choice:
        out.emplace_back(alpha.p0(), world(w));
        out.emplace_back(alpha.p1(), world(w));
        return out;
    case program_kind::star:
        out.emplace_back(
            program::choice(program::seq(alpha.p0(), alpha), program::test(formula::bool_lit(true))),
            world(w));
        return out;
    default: throw kind_mismatch("statement outside the pl pack: " + alpha.to_string());
    }
}

std::vector<std::pair<program, world>> one_step_heap(const pack_context& ctx, const program& alpha,
                                                     const store_heap& sh) {
    std::vector<std::pair<program, world>> out;
    step_result r = step_sl(ctx, alpha, sh);
    for (auto& s : r.successors) out.emplace_back(s.prog, world(s.lab.as_heap()));
    return out;
}

} // namespace

std::vector<std::pair<program, world>> one_step(const pack_context& ctx, const program& alpha,
                                                const world& w) {
    if (alpha.is_ter()) throw std::invalid_argument("no transitions from ter");
    switch (ctx.inst) {
    case inst_id::wp:
    case inst_id::fodl: return one_step_map(ctx, alpha, w.as_map());
    case inst_id::pl: return one_step_path(ctx, alpha, w.as_path());
    case inst_id::sl: return one_step_heap(ctx, alpha, w.as_heap());
    }
    throw std::logic_error("unreachable");
}

run_result run_to_completion(const pack_context& ctx, const program& alpha, const world& w,
                             int64_t budget) {
    run_result res;
    if (alpha.is_ter()) {
        res.finals.push_back(w);
        return res;
    }
    std::deque<std::pair<program, world>> work;
    std::set<std::string> seen;
    std::set<std::string> final_keys;
    work.emplace_back(alpha, w);
    seen.insert(alpha.to_string() + "@" + w.to_string());
    bool deterministic = true;
    res.trace.emplace_back(alpha, w);
    int64_t spent = 0;
    while (!work.empty()) {
        auto [p, cur] = work.front();
        work.pop_front();
        if (++spent > budget) {
            res.budget_exceeded = true;
            res.trace.clear();
            return res;
        }
        auto succs = one_step(ctx, p, cur);
        if (succs.size() > 1) deterministic = false;
        for (auto& [p2, w2] : succs) {
            if (p2.is_ter()) {
                if (final_keys.insert(w2.to_string()).second) res.finals.push_back(w2);
                if (deterministic) res.trace.emplace_back(p2, w2);
                continue;
            }
            std::string key = p2.to_string() + "@" + w2.to_string();
            if (seen.insert(key).second) {
                work.emplace_back(p2, w2);
                if (deterministic) res.trace.emplace_back(p2, w2);
            }
        }
    }
    if (!deterministic) res.trace.clear();
    std::sort(res.finals.begin(), res.finals.end());
    return res;
}

tri eval_dlp_formula(const pack_context& ctx, const world& w, const formula& f, int64_t budget) {
    switch (f.kind()) {
    case formula_kind::cmp:
    case formula_kind::bool_lit:
    case formula_kind::points_to:
    case formula_kind::tfirst:
    case formula_kind::suffix:
    case formula_kind::sep: {
        bool v;
        if (ctx.inst == inst_id::sl)
            v = eval_sl_formula(w.as_heap(), f);
        else if (ctx.inst == inst_id::pl)
            v = eval_temporal(w.as_path().path, f);
        else
            v = eval_arith_formula(w.as_map(), f);
        return v ? tri::yes : tri::no;
    }
    case formula_kind::neg: {
        tri v = eval_dlp_formula(ctx, w, f.arg0(), budget);
        if (v == tri::unknown) return v;
        return v == tri::yes ? tri::no : tri::yes;
    }
    case formula_kind::conj: {
        tri a = eval_dlp_formula(ctx, w, f.arg0(), budget);
        if (a == tri::no) return tri::no;
        tri b = eval_dlp_formula(ctx, w, f.arg1(), budget);
        if (b == tri::no) return tri::no;
        return (a == tri::yes && b == tri::yes) ? tri::yes : tri::unknown;
    }
    case formula_kind::disj: {
        tri a = eval_dlp_formula(ctx, w, f.arg0(), budget);
        if (a == tri::yes) return tri::yes;
        tri b = eval_dlp_formula(ctx, w, f.arg1(), budget);
        if (b == tri::yes) return tri::yes;
        return (a == tri::no && b == tri::no) ? tri::no : tri::unknown;
    }
    case formula_kind::impl:
        return eval_dlp_formula(ctx, w, formula::disj(formula::neg(f.arg0()), f.arg1()), budget);
    case formula_kind::box:
    case formula_kind::dia: {
        bool is_box = f.kind() == formula_kind::box;
        if (f.prog().is_ter()) return eval_dlp_formula(ctx, w, f.arg0(), budget);
        run_result r = run_to_completion(ctx, f.prog(), w, budget);
        bool any_unknown = r.budget_exceeded;
        for (auto& fw : r.finals) {
            tri v = eval_dlp_formula(ctx, fw, f.arg0(), budget);
            if (is_box && v == tri::no) return tri::no;
            if (!is_box && v == tri::yes) return tri::yes;
            if (v == tri::unknown) any_unknown = true;
        }
        if (any_unknown) return tri::unknown;
        return is_box ? tri::yes : tri::no;
    }
    }
    throw std::logic_error("unreachable");
}

std::optional<int64_t> validate_termination_finiteness(const pack_context& ctx,
                                                       const program& alpha, const world& w,
                                                       int64_t budget) {
    // DFS over execution paths, pruning any extension that fires a
    // (world, program) pair already fired along the current path.
    int64_t count = 0;
    int64_t spent = 0;
    std::vector<std::string> path_keys;
    std::function<bool(const program&, const world&)> dfs = [&](const program& p,
                                                                const world& cur) -> bool {
        if (p.is_ter()) {
            ++count;
            return true;
        }
        if (++spent > budget) return false;
        std::string key = p.to_string() + "@" + cur.to_string();
        if (std::find(path_keys.begin(), path_keys.end(), key) != path_keys.end()) return true;
        path_keys.push_back(key);
        for (auto& [p2, w2] : one_step(ctx, p, cur)) {
            if (!dfs(p2, w2)) return false;
        }
        path_keys.pop_back();
        return true;
    };
    if (alpha.is_ter()) return 1; // the empty path
    if (!dfs(alpha, w)) return std::nullopt;
    return count;
}

// ---------------------------------------------------------------------------
// Termination certificates
// ---------------------------------------------------------------------------

namespace {

bool loop_free(const program& p) {
    switch (p.kind()) {
    case program_kind::loop:
    case program_kind::star: return false;
    case program_kind::seq:
    case program_kind::choice: return loop_free(p.p0()) && loop_free(p.p1());
    case program_kind::ifte: return loop_free(p.p0()) && loop_free(p.p1());
    default: return true;
    }
}

// Symbolic end stores of a loop-free wp body from a symbolic store,
// case-splitting undecided guards into hypothesis sets.
struct sym_state {
    program p;
    store s;
    std::vector<labeled_formula> hyps;
};

std::optional<std::vector<sym_state>> unroll_body(const pack_context& ctx, const program& body,
                                                  const store& start,
                                                  std::vector<labeled_formula> hyps) {
    std::vector<sym_state> done;
    std::deque<sym_state> work;
    work.push_back({body, start, std::move(hyps)});
    int64_t fuel = 10000;
    while (!work.empty()) {
        sym_state st = work.front();
        work.pop_front();
        if (--fuel < 0) return std::nullopt;
        if (st.p.is_ter()) {
            done.push_back(st);
            continue;
        }
        step_result r = step(ctx, st.hyps, st.p, label(st.s));
        if (!r.exhaustive && r.undecided_guard) {
            // split on the guard and retry both sides
            sym_state yes = st, no = st;
            yes.hyps.push_back(labeled_formula::labeled(r.undecided_label, *r.undecided_guard));
            no.hyps.push_back(
                labeled_formula::labeled(r.undecided_label, formula::neg(*r.undecided_guard)));
            work.push_back(std::move(yes));
            work.push_back(std::move(no));
            continue;
        }
        for (auto& succ : r.successors) {
            sym_state next = st;
            next.p = succ.prog;
            next.s = succ.lab.as_store();
            work.push_back(std::move(next));
        }
    }
    return done;
}

std::optional<termination_proof> check_variant(const pack_context& ctx,
                                               const std::vector<labeled_formula>& gamma,
                                               const program& alpha, const label& sigma,
                                               const termination_certificate& cert) {
    if (alpha.kind() != program_kind::loop || ctx.inst != inst_id::wp) return std::nullopt;
    if (!loop_free(alpha.p0())) return std::nullopt;
    (void)gamma;
    (void)sigma;

    const poly& v = cert.variant_expr;
    std::set<std::string> prog_vars = alpha.vars();
    v.collect_vars(prog_vars);
    fresh_supply fresh(prog_vars);
    std::vector<std::pair<std::string, poly>> entries;
    for (auto& x : prog_vars) entries.emplace_back(x, poly::var(fresh.next()));
    store sym(std::move(entries));

    termination_proof proof;
    proof.cert = cert;

    formula guard_applied = apply_label(label(sym), alpha.cond());
    formula v_pos = formula::cmp(sym.apply(v).to_expr(), cmp_op::gt, expr::lit(0));
    sequent pos;
    pos.left.push_back(labeled_formula::labeled(label(store{}), guard_applied));
    pos.right.push_back(labeled_formula::labeled(label(store{}), v_pos));
    oracle_verdict ov = check_sequent_validity(pos, ctx.oracle);
    if (!ov.is_valid()) return std::nullopt;
    proof.obligations.emplace_back(pos, ov.to_string());

    auto ends = unroll_body(
        ctx, alpha.p0(), sym,
        {labeled_formula::labeled(label(sym), alpha.cond())});
    if (!ends) return std::nullopt;
    poly v0 = sym.apply(v);
    for (auto& end : *ends) {
        poly v1 = end.s.apply(v);
        // v' <= v - 1: strict rational decrease alone does not bound the
        // iteration count
        formula dec = formula::cmp(v1.to_expr(), cmp_op::le, (v0 - poly(rational(1))).to_expr());
        sequent s;
        for (auto& h : end.hyps) {
            if (h.kind() != labeled_kind::labeled) continue;
            s.left.push_back(
                labeled_formula::labeled(label(store{}), apply_label(h.lab(), h.fml())));
        }
        s.right.push_back(labeled_formula::labeled(label(store{}), dec));
        oracle_verdict dv = check_sequent_validity(s, ctx.oracle);
        if (!dv.is_valid()) return std::nullopt;
        proof.obligations.emplace_back(s, dv.to_string());
    }
    return proof;
}

std::optional<termination_proof> check_unroll(const pack_context& ctx,
                                              const std::vector<labeled_formula>& gamma,
                                              const program& alpha, const label& sigma,
                                              const termination_certificate& cert) {
    // bounded symbolic search for a discharged path to ter
    struct node {
        program p;
        label l;
        std::vector<std::string> tags;
    };
    std::deque<node> work;
    work.push_back({alpha, sigma, {}});
    for (int64_t depth = 0; depth < cert.bound && !work.empty(); ++depth) {
        std::deque<node> next;
        while (!work.empty()) {
            node n = work.front();
            work.pop_front();
            step_result r = step(ctx, gamma, n.p, n.l);
            for (auto& succ : r.successors) {
                node m{succ.prog, succ.lab, n.tags};
                m.tags.push_back(succ.rule_tag);
                if (succ.prog.is_ter()) {
                    termination_proof proof;
                    proof.cert = cert;
                    proof.path = m.tags;
                    return proof;
                }
                next.push_back(std::move(m));
            }
        }
        work = std::move(next);
    }
    return std::nullopt;
}

} // namespace

std::optional<termination_proof> terminates(const pack_context& ctx,
                                            const std::vector<labeled_formula>& gamma,
                                            const program& alpha, const label& sigma,
                                            const std::optional<termination_certificate>& cert) {
    if (alpha.is_ter()) {
        termination_proof p;
        p.cert = termination_certificate::unroll(1);
        return p;
    }
    if (cert) {
        if (cert->k == termination_certificate::kind::unroll)
            return check_unroll(ctx, gamma, alpha, sigma, *cert);
        return check_variant(ctx, gamma, alpha, sigma, *cert);
    }
    // no certificate: a ground label can be executed directly
    bool ground = (sigma.is_store() && sigma.as_store().is_ground()) || sigma.is_heap() ||
                  (sigma.is_seq() && [&] {
                      for (auto& s : sigma.as_seq().elems)
                          if (!s.is_ground()) return false;
                      return true;
                  }());
    if (!ground) return std::nullopt;
    run_result r = run_to_completion(ctx, alpha, world_from_label(ctx, sigma, {}), 20000);
    if (!r.finals.empty()) {
        termination_proof p;
        p.cert = termination_certificate::unroll(20000);
        return p;
    }
    return std::nullopt;
}

world world_from_label(const pack_context& ctx, const label& l, const ground_world& g) {
    switch (ctx.inst) {
    case inst_id::wp:
    case inst_id::fodl: return world(l.as_store().ground(g));
    case inst_id::pl: {
        pl_world w;
        if (l.is_store())
            w.path.push_back(l.as_store().ground(g));
        else
            for (auto& s : l.as_seq().elems) w.path.push_back(s.ground(g));
        return world(std::move(w));
    }
    case inst_id::sl: return world(l.as_heap());
    }
    throw std::logic_error("unreachable");
}

} // namespace dlp
