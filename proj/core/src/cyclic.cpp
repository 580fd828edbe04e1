#include "dlp/cyclic.hpp"

#include <algorithm>

namespace dlp {

bool is_progressive(const proof_graph& g, int parent, const cp_pair& p) {
    const proof_node& n = g.node(parent);
    if (!p.target) return false;
    if (n.rule == rule_id::box_r) return true;
    if ((n.rule == rule_id::box_l || n.rule == rule_id::dia_step) && n.app.term_proof.has_value())
        return true;
    return false;
}

namespace {

// bijection between bud occurrences and companion occurrences under theta
std::optional<std::vector<std::pair<occurrence, occurrence>>> bud_pairing(
    const sequent& bud, const sequent& companion, const substitution& theta) {
    std::vector<std::pair<occurrence, occurrence>> out;
    auto side = [&](bool left) -> bool {
        const auto& bfs = left ? bud.left : bud.right;
        const auto& cfs = left ? companion.left : companion.right;
        if (bfs.size() != cfs.size()) return false;
        std::vector<bool> used(cfs.size(), false);
        for (size_t i = 0; i < bfs.size(); ++i) {
            labeled_formula want = bfs[i].normalized();
            bool ok = false;
            for (size_t j = 0; j < cfs.size(); ++j) {
                if (used[j]) continue;
                if (cfs[j].substitute(theta).normalized() == want) {
                    used[j] = true;
                    out.push_back({{left, i}, {left, j}});
                    ok = true;
                    break;
                }
            }
            if (!ok) return false;
        }
        return true;
    };
    if (!side(true) || !side(false)) return std::nullopt;
    return out;
}

struct cycle_info {
    std::vector<int> nodes; // companion ... bud
    const backlink_rec* link = nullptr;
};

cycle_info cycle_of(const proof_graph& g, const backlink_rec& b) {
    cycle_info c;
    c.link = &b;
    for (int cur = b.bud; cur != b.companion; cur = g.node(cur).parent) c.nodes.push_back(cur);
    c.nodes.push_back(b.companion);
    std::reverse(c.nodes.begin(), c.nodes.end());
    return c;
}

size_t child_slot(const proof_graph& g, int parent, int child) {
    const auto& kids = g.node(parent).children;
    for (size_t i = 0; i < kids.size(); ++i)
        if (kids[i] == child) return i;
    throw std::logic_error("child slot not found");
}

// DFS over trace successors along the cycle path; true when some trace
// returns to `start` with at least one progressive step.
bool has_progressive_returning_trace(const proof_graph& g, const cycle_info& cyc,
                                     const occurrence& start, bool* any_returning) {
    struct state {
        size_t depth;
        occurrence occ;
        bool prog;
    };
    std::vector<state> stack{{0, start, false}};
    bool found_return = false;
    while (!stack.empty()) {
        state st = stack.back();
        stack.pop_back();
        if (st.depth + 1 == cyc.nodes.size()) {
            // at the bud: jump through the back-link pairing
            auto pairing =
                bud_pairing(g.node(cyc.link->bud).seq, g.node(cyc.link->companion).seq,
                            cyc.link->theta);
            if (!pairing) continue;
            for (auto& [budocc, compocc] : *pairing) {
                if (budocc == st.occ) {
                    if (compocc == start) {
                        found_return = true;
                        if (st.prog) {
                            if (any_returning) *any_returning = true;
                            return true;
                        }
                    }
                }
            }
            continue;
        }
        int parent = cyc.nodes[st.depth];
        int child = cyc.nodes[st.depth + 1];
        const proof_node& pn = g.node(parent);
        size_t slot = child_slot(g, parent, child);
        for (auto& p : pn.app.cp_maps[slot]) {
            if (p.from == st.occ)
                stack.push_back({st.depth + 1, p.to, st.prog || is_progressive(g, parent, p)});
        }
    }
    if (any_returning) *any_returning = found_return;
    return false;
}

} // namespace

cyclic_verdict check_cyclic(const proof_graph& g) {
    for (int id : g.open_ids())
        throw open_goals("goal " + std::to_string(id) + " is open");
    cyclic_verdict v;
    v.caveat =
        "per-cycle check: sufficient for back-links whose trace follows a single "
        "target formula";
    for (auto& b : g.backlinks()) {
        cycle_info cyc = cycle_of(g, b);
        bool ok = false;
        bool any_returning = false;
        const sequent& comp = g.node(b.companion).seq;
        for (size_t i = 0; i < comp.left.size() && !ok; ++i) {
            bool r = false;
            ok = has_progressive_returning_trace(g, cyc, {true, i}, &r);
            any_returning |= r;
        }
        for (size_t i = 0; i < comp.right.size() && !ok; ++i) {
            bool r = false;
            ok = has_progressive_returning_trace(g, cyc, {false, i}, &r);
            any_returning |= r;
        }
        if (!ok) {
            v.accepted = false;
            v.witness_cycle = cyc.nodes;
            v.reason = any_returning
                           ? "cycle has a returning trace but no progressive step"
                           : "cycle has no returning derivation trace";
            return v;
        }
    }
    v.accepted = true;
    return v;
}

proof_verdict check_proof(const pack_context& ctx, const proof_graph& g, proof_graph* validated) {
    proof_verdict out;
    out.caveat.clear();
    if (g.size() == 0) {
        out.reason = "empty graph";
        return out;
    }
    // re-validate every rule application on a copy
    proof_graph checked = g;
    for (size_t i = 0; i < g.size(); ++i) {
        const proof_node& n = g.node(static_cast<int>(i));
        switch (n.st) {
        case proof_node::status::open:
            out.node = n.id;
            out.reason = "open goal";
            return out;
        case proof_node::status::bud: break;
        case proof_node::status::closed: {
            rule_application app;
            try {
                app = apply_rule(ctx, n.seq, n.rule, n.params);
            } catch (std::exception& e) {
                out.node = n.id;
                out.reason = std::string(rule_name(n.rule)) + ": " + e.what();
                return out;
            }
            if (app.premises.size() != n.children.size()) {
                out.node = n.id;
                out.reason = "premise count disagrees with recorded children";
                return out;
            }
            for (size_t k = 0; k < app.premises.size(); ++k) {
                if (!app.premises[k].same_as(g.node(n.children[k]).seq)) {
                    out.node = n.id;
                    out.reason = "recorded child sequent differs from the re-derived premise";
                    return out;
                }
            }
            checked.node_mut(n.id).app = std::move(app);
            break;
        }
        }
    }
    // back-link substitutions replay exactly
    for (auto& b : g.backlinks()) {
        if (!checked.is_ancestor(b.companion, b.bud)) {
            out.node = b.bud;
            out.reason = "companion is not an ancestor of the bud";
            return out;
        }
        if (!checked.node(b.companion).seq.substitute(b.theta).same_as(checked.node(b.bud).seq)) {
            out.node = b.bud;
            out.reason = "bud is not the recorded substitution instance of its companion";
            return out;
        }
        if (!bud_pairing(checked.node(b.bud).seq, checked.node(b.companion).seq, b.theta)) {
            out.node = b.bud;
            out.reason = "bud/companion occurrences cannot be paired";
            return out;
        }
    }
    if (validated) *validated = checked;
    cyclic_verdict cv;
    try {
        cv = check_cyclic(checked);
    } catch (open_goals& e) {
        out.reason = e.what();
        return out;
    }
    out.caveat = cv.caveat;
    if (!cv.accepted) {
        out.reason = cv.reason;
        if (!cv.witness_cycle.empty()) {
            out.node = cv.witness_cycle.front();
            out.reason += " (cycle:";
            for (int id : cv.witness_cycle) out.reason += " " + std::to_string(id);
            out.reason += ")";
        }
        return out;
    }
    out.accepted = true;
    return out;
}

} // namespace dlp
