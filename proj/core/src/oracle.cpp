#include "dlp/oracle.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unistd.h>

namespace dlp {

oracle_config oracle_config::from_env() {
    oracle_config cfg;
    if (const char* p = std::getenv("DLP_SMT")) cfg.smt_path = p;
    return cfg;
}

std::string entailment_problem::to_string() const {
    std::string s;
    for (size_t i = 0; i < hyps.size(); ++i) s += (i ? ", " : "") + hyps[i].to_string();
    s += " ==> ";
    for (size_t i = 0; i < goals.size(); ++i) s += (i ? ", " : "") + goals[i].to_string();
    return s;
}

std::string oracle_verdict::to_string() const {
    switch (kind) {
    case verdict_kind::valid:
        if (bound_relative)
            return "Valid(" + backend + ", bound-relative B=" + std::to_string(bound) + ")";
        return "Valid(" + backend + ")";
    case verdict_kind::counterexample: {
        std::string s = "Counterexample {";
        bool first = true;
        for (auto& [x, v] : cex) {
            if (!first) s += ", ";
            s += x + " = " + std::to_string(v);
            first = false;
        }
        return s + "}";
    }
    case verdict_kind::unknown: return "Unknown(" + reason + ")";
    }
    return "?";
}

static bool seq_label_is_ground(const store_seq& seq) {
    for (auto& s : seq.elems)
        if (!s.is_ground()) return false;
    return true;
}

static formula ground_one(const labeled_formula& lf) {
    if (lf.kind() != labeled_kind::labeled)
        throw unsupported_connective("program transitions do not belong in oracle sequents");
    const formula& f = lf.fml();
    if (f.is_dynamic()) throw unsupported_connective("dynamic formula in oracle sequent");
    const label& l = lf.lab();
    if (l.is_seq() && f.is_temporal()) {
        if (!seq_label_is_ground(l.as_seq()))
            throw unsupported_connective("temporal formula with a non-ground path label");
        return formula::bool_lit(eval_temporal(ground_path(l.as_seq(), {}), f));
    }
    return apply_label(l, f);
}

entailment_problem ground_sequent(const sequent& s) {
    entailment_problem p;
    std::set<std::string> vars;
    for (auto& lf : s.left) {
        formula f = ground_one(lf);
        f.collect_vars(vars);
        p.hyps.push_back(std::move(f));
    }
    for (auto& lf : s.right) {
        formula f = ground_one(lf);
        f.collect_vars(vars);
        p.goals.push_back(std::move(f));
    }
    p.vars.assign(vars.begin(), vars.end());
    return p;
}

// --- bounded backend ---------------------------------------------------------

namespace {

bool point_falsifies(const entailment_problem& p, const ground_world& g) {
    for (auto& h : p.hyps)
        if (!eval_arith_formula(g, h)) return false;
    for (auto& c : p.goals)
        if (eval_arith_formula(g, c)) return false;
    return true;
}

// Sweeps shells of increasing max-norm so that a counterexample found at
// bound B is found first at every larger bound too.
oracle_verdict bounded_check(const entailment_problem& p, int64_t bound) {
    oracle_verdict v;
    v.backend = "bounded";
    v.bound = bound;
    size_t k = p.vars.size();
    bool overflowed = false;
    if (k == 0) {
        ground_world g;
        try {
            if (point_falsifies(p, g)) {
                v.kind = verdict_kind::counterexample;
                return v;
            }
        } catch (arith_overflow&) {
            v.kind = verdict_kind::unknown;
            v.reason = "overflow";
            return v;
        }
        v.kind = verdict_kind::valid;
        v.bound_relative = false;
        return v;
    }
    std::vector<int64_t> point(k);
    for (int64_t r = 0; r <= bound; ++r) {
        // enumerate [-r, r]^k keeping only max-norm == r
        std::vector<int64_t> idx(k, -r);
        for (;;) {
            int64_t norm = 0;
            for (auto x : idx) norm = std::max(norm, x < 0 ? -x : x);
            if (norm == r) {
                ground_world g;
                for (size_t i = 0; i < k; ++i) g[p.vars[i]] = idx[i];
                try {
                    if (point_falsifies(p, g)) {
                        v.kind = verdict_kind::counterexample;
                        v.cex = std::move(g);
                        return v;
                    }
                } catch (arith_overflow&) {
                    overflowed = true;
                }
            }
            size_t d = 0;
            while (d < k && idx[d] == r) idx[d++] = -r;
            if (d == k) break;
            ++idx[d];
        }
    }
    if (overflowed) {
        v.kind = verdict_kind::unknown;
        v.reason = "overflow during sweep";
        return v;
    }
    v.kind = verdict_kind::valid;
    v.bound_relative = true;
    return v;
}

// --- SMT-LIB subprocess backend ------------------------------------------------

void smt_poly(std::ostream& os, const poly& p) {
    if (p.is_zero()) {
        os << "0";
        return;
    }
    os << "(+";
    for (auto& [m, c] : p.terms()) {
        os << " (*";
        int64_t n = c.to_int(); // caller cleared denominators
        if (n < 0)
            os << " (- " << -n << ")";
        else
            os << " " << n;
        for (auto& [var, k] : m.pows)
            for (int i = 0; i < k; ++i) os << " " << var;
        os << ")";
    }
    os << ")";
}

void smt_atom(std::ostream& os, const formula& f) {
    poly d = to_poly(f.lhs()) - to_poly(f.rhs());
    int64_t lcm = 1;
    for (auto& [m, c] : d.terms()) lcm = std::lcm(lcm, c.den());
    d = d.scaled(rational(lcm));
    const char* op = nullptr;
    switch (f.op()) {
    case cmp_op::eq: op = "="; break;
    case cmp_op::lt: op = "<"; break;
    case cmp_op::le: op = "<="; break;
    case cmp_op::gt: op = ">"; break;
    case cmp_op::ge: op = ">="; break;
    }
    os << "(" << op << " ";
    smt_poly(os, d);
    os << " 0)";
}

void smt_formula(std::ostream& os, const formula& f) {
    switch (f.kind()) {
    case formula_kind::cmp: smt_atom(os, f); return;
    case formula_kind::bool_lit: os << (f.bool_value() ? "true" : "false"); return;
    case formula_kind::neg:
        os << "(not ";
        smt_formula(os, f.arg0());
        os << ")";
        return;
    case formula_kind::conj:
    case formula_kind::disj:
    case formula_kind::impl: {
        const char* op = f.kind() == formula_kind::conj  ? "and"
                         : f.kind() == formula_kind::disj ? "or"
                                                          : "=>";
        os << "(" << op << " ";
        smt_formula(os, f.arg0());
        os << " ";
        smt_formula(os, f.arg1());
        os << ")";
        return;
    }
    default: throw unsupported_connective("connective not encodable in SMT-LIB: " + f.to_string());
    }
}

std::string run_process(const std::string& cmd) {
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw solver_process_error("cannot spawn " + cmd);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int rc = pclose(pipe);
    if (rc == -1) throw solver_process_error("solver process failed");
    return out;
}

oracle_verdict smt_check(const entailment_problem& p, const oracle_config& cfg) {
    std::ostringstream q;
    q << "(set-option :produce-models true)\n(set-logic ALL)\n";
    for (auto& v : p.vars) q << "(declare-const " << v << " Int)\n";
    q << "(assert (not (=> (and true";
    for (auto& h : p.hyps) {
        q << " ";
        smt_formula(q, h);
    }
    q << ") (or false";
    for (auto& g : p.goals) {
        q << " ";
        smt_formula(q, g);
    }
    q << "))))\n(check-sat)\n";
    if (!p.vars.empty()) {
        q << "(get-value (";
        for (auto& v : p.vars) q << v << " ";
        q << "))\n";
    }

    char tmpl[] = "/tmp/dlp_smt_XXXXXX";
    int fd = mkstemp(tmpl);
    if (fd < 0) throw solver_process_error("cannot create query file");
    {
        std::ofstream f(tmpl);
        f << q.str();
    }
    std::string out = run_process(cfg.smt_path + " " + tmpl + " 2>&1");
    std::remove(tmpl);
    close(fd);

    std::istringstream is(out);
    std::string first;
    is >> first;
    oracle_verdict v;
    v.backend = "smt";
    if (first == "unsat") {
        v.kind = verdict_kind::valid;
        return v;
    }
    if (first == "unknown") {
        v.kind = verdict_kind::unknown;
        v.reason = "solver returned unknown";
        return v;
    }
    if (first != "sat") throw solver_process_error("garbled solver output: " + out.substr(0, 80));
    // parse ((x 5) (y (- 2)) ...)
    ground_world cex;
    std::string rest((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    size_t i = 0;
    auto skip = [&] { while (i < rest.size() && (std::isspace((unsigned char)rest[i]) || rest[i] == '(' || rest[i] == ')')) ++i; };
    for (auto& var : p.vars) {
        size_t at = rest.find(var, i);
        if (at == std::string::npos) throw solver_process_error("model missing " + var);
        i = at + var.size();
        skip();
        bool negated = false;
        if (i < rest.size() && rest[i] == '-') {
            negated = true;
            ++i;
            skip();
        }
        size_t j = i;
        while (j < rest.size() && std::isdigit((unsigned char)rest[j])) ++j;
        if (j == i) throw solver_process_error("garbled model value for " + var);
        int64_t val = std::stoll(rest.substr(i, j - i));
        cex[var] = negated ? -val : val;
        i = j;
    }
    v.kind = verdict_kind::counterexample;
    v.cex = std::move(cex);
    return v;
}

} // namespace

oracle_verdict check_validity(const entailment_problem& p, const oracle_config& cfg) {
    oracle_verdict v;
    if (!cfg.smt_path.empty()) {
        v = smt_check(p, cfg);
    } else {
        v = bounded_check(p, cfg.bound);
    }
    if (v.kind == verdict_kind::counterexample) {
        // refutation soundness, checked on every emission
        if (!point_falsifies(p, v.cex)) {
            v.kind = verdict_kind::unknown;
            v.reason = "candidate counterexample failed re-evaluation";
            v.cex.clear();
        }
    }
    return v;
}

oracle_verdict check_sequent_validity(const sequent& s, const oracle_config& cfg) {
    return check_validity(ground_sequent(s), cfg);
}

tri decide_guard(const std::vector<labeled_formula>& gamma, const label& l, const formula& guard,
                 const oracle_config& cfg) {
    sequent s;
    for (auto& lf : gamma)
        if (lf.kind() == labeled_kind::labeled && !lf.fml().is_dynamic()) s.left.push_back(lf);
    s.right.push_back(labeled_formula::labeled(l, guard));
    if (check_validity(ground_sequent(s), cfg).is_valid()) return tri::yes;
    s.right.back() = labeled_formula::labeled(l, formula::neg(guard));
    if (check_validity(ground_sequent(s), cfg).is_valid()) return tri::no;
    return tri::unknown;
}

} // namespace dlp
