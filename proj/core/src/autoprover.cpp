#include "dlp/autoprover.hpp"

namespace dlp {

const char* failure_text(failure_reason r) {
    switch (r) {
    case failure_reason::budget_exceeded: return "BudgetExceeded";
    case failure_reason::oracle_unknown: return "OracleUnknown";
    case failure_reason::no_backlink: return "NoBacklink";
    case failure_reason::termination_unknown: return "TerminationUnknown";
    }
    return "?";
}

generalize_proposal loop_generalize(const store& old_label, const store& new_label,
                                    fresh_supply& fresh) {
    anti_unify_result r = anti_unify(old_label, new_label, fresh);
    return {std::move(r.template_), std::move(r.theta1), std::move(r.theta2)};
}

namespace {

struct searcher {
    pack_context ctx;
    const search_config& cfg;
    proof_graph g;
    fresh_supply fresh;
    // nodes where a step fired on a loop-head target: node -> (key, label)
    std::map<int, std::pair<std::string, label>> visits;
    // generalization templates: node -> program key
    std::map<int, std::string> templates;
    std::optional<failure_reason> failed;
    std::string detail;

    searcher(inst_id inst, const sequent& root, const search_config& c)
        : cfg(c), fresh(root.free_vars()) {
        ctx.inst = inst;
        ctx.oracle = c.oracle;
        ctx.alloc_base = c.alloc_base;
        g.set_inst(inst);
        g.add_root(root.normalized());
    }

    void fail(failure_reason r, std::string why) {
        if (!failed) {
            failed = r;
            detail = std::move(why);
        }
    }

    int depth_of(int id) const {
        int d = 0;
        for (int cur = g.node(id).parent; cur >= 0; cur = g.node(cur).parent) ++d;
        return d;
    }

    // first right-side modality over a proper program
    std::optional<occurrence> dynamic_target(const sequent& s) const {
        for (size_t i = 0; i < s.right.size(); ++i) {
            auto& lf = s.right[i];
            if (lf.kind() != labeled_kind::labeled) continue;
            auto k = lf.fml().kind();
            if ((k == formula_kind::box || k == formula_kind::dia) && !lf.fml().prog().is_ter())
                return occurrence{false, i};
        }
        return std::nullopt;
    }

    bool try_propositional(int id) {
        static const rule_id order[] = {rule_id::box_ter, rule_id::dia_ter};
        for (rule_id r : order) {
            try {
                g.apply(ctx, id, r, {});
                return true;
            } catch (not_applicable&) {
            }
        }
        // connective decomposition; negations of non-dynamic formulas stay
        // put so guard decisions keep their hypotheses
        const sequent& s = g.node(id).seq;
        auto decompose = [&](bool left) -> bool {
            const auto& fs = left ? s.left : s.right;
            for (size_t i = 0; i < fs.size(); ++i) {
                if (fs[i].kind() != labeled_kind::labeled) continue;
                const formula& f = fs[i].fml();
                rule_params rp;
                rp.index = static_cast<int>(i);
                switch (f.kind()) {
                case formula_kind::neg:
                    if (!f.arg0().is_dynamic()) continue;
                    g.apply(ctx, id, left ? rule_id::neg_l : rule_id::neg_r, rp);
                    return true;
                case formula_kind::conj:
                    g.apply(ctx, id, left ? rule_id::and_l : rule_id::and_r, rp);
                    return true;
                case formula_kind::disj:
                    g.apply(ctx, id, left ? rule_id::or_l : rule_id::or_r, rp);
                    return true;
                case formula_kind::impl:
                    g.apply(ctx, id, left ? rule_id::imp_l : rule_id::imp_r, rp);
                    return true;
                default: continue;
                }
            }
            return false;
        };
        return decompose(true) || decompose(false);
    }

    bool try_close(int id) {
        try {
            g.apply(ctx, id, rule_id::ax, {});
            return true;
        } catch (not_applicable&) {
        }
        const sequent& s = g.node(id).seq;
        for (auto& fs : {s.left, s.right})
            for (auto& lf : fs)
                if (lf.kind() != labeled_kind::labeled || lf.fml().is_dynamic()) return false;
        try {
            g.apply(ctx, id, rule_id::ter_close, {});
            return true;
        } catch (obligation_failed& e) {
            fail(failure_reason::oracle_unknown, e.what());
            return false;
        } catch (not_applicable&) {
            return false;
        }
    }

    // weakens the goal down to just the dynamic target, so buds and templates
    // carry no context
    int weaken_to_target(int id, occurrence target) {
        // drop all left formulas
        while (!g.node(id).seq.left.empty()) {
            rule_params rp;
            rp.index = 0;
            id = g.apply(ctx, id, rule_id::wk_l, rp)[0];
        }
        // drop every right formula except the target
        while (g.node(id).seq.right.size() > 1) {
            rule_params rp;
            rp.index = target.index == 0 ? 1 : 0;
            size_t victim = static_cast<size_t>(rp.index);
            if (victim < target.index) target.index -= 1;
            id = g.apply(ctx, id, rule_id::wk_r, rp)[0];
        }
        return id;
    }

    bool try_backlink(int id, occurrence target) {
        const labeled_formula tgt = g.node(id).seq.right[target.index];
        std::string key = tgt.fml().prog().normalized().to_string();
        bool stepped_since = false; // progress gate: a step on this key must
                                    // separate the bud from its companion
        for (int cur = g.node(id).parent; cur >= 0; cur = g.node(cur).parent) {
            auto vit = visits.find(cur);
            if (vit != visits.end() && vit->second.first == key) stepped_since = true;
            auto it = templates.find(cur);
            if (it == templates.end() || it->second != key) continue;
            if (!stepped_since) continue;
            // candidate bud after weakening away the context
            sequent cand;
            cand.right.push_back(tgt);
            auto theta = match_label(g.node(cur).seq, cand);
            if (!theta) continue;
            int bud = weaken_to_target(id, target);
            g.add_backlink(bud, cur, theta);
            return true;
        }
        return false;
    }

    bool below_template_for(int id, const std::string& key) const {
        for (int cur = id; cur >= 0; cur = g.node(cur).parent) {
            auto it = templates.find(cur);
            if (it != templates.end() && it->second == key) return true;
        }
        return false;
    }

    bool try_generalize(int id, occurrence target) {
        if (!cfg.enable_generalization) return false;
        const labeled_formula tgt = g.node(id).seq.right[target.index];
        if (!tgt.lab().is_store()) return false; // anti-unification works on stores
        std::string key = tgt.fml().prog().normalized().to_string();
        if (below_template_for(id, key)) return false;
        for (int cur = g.node(id).parent; cur >= 0; cur = g.node(cur).parent) {
            auto it = visits.find(cur);
            if (it == visits.end() || it->second.first != key) continue;
            if (!it->second.second.is_store()) return false;
            generalize_proposal prop =
                loop_generalize(it->second.second.as_store(), tgt.lab().as_store(), fresh);
            int narrowed = weaken_to_target(id, target);
            const labeled_formula& t2 = g.node(narrowed).seq.right[0];
            rule_params rp;
            rp.sub_template = sequent{
                {}, {labeled_formula::labeled(label(prop.template_store), t2.fml())}};
            rp.sub_theta = prop.theta_new;
            int tmpl = g.apply(ctx, narrowed, rule_id::sub, rp)[0];
            templates[tmpl] = key;
            return true;
        }
        return false;
    }

    bool try_step(int id, occurrence target) {
        const sequent& s = g.node(id).seq;
        const labeled_formula& tgt = s.right[target.index];
        const program& alpha = tgt.fml().prog();
        const label& sigma = tgt.lab();
        std::string key = alpha.normalized().to_string();
        step_result sr = step(ctx, s.left, alpha, sigma);
        if (!sr.exhaustive) {
            try {
                guard_case_split(ctx, g, id);
                return true;
            } catch (std::exception& e) {
                fail(failure_reason::oracle_unknown, e.what());
                return false;
            }
        }
        visits[id] = {key, sigma};
        if (tgt.fml().kind() == formula_kind::box) {
            rule_params rp;
            rp.index = static_cast<int>(target.index);
            g.apply(ctx, id, rule_id::box_r, rp);
            return true;
        }
        // diamond: pick the first derivable transition, with the configured
        // certificate when one exists for this loop site
        if (sr.successors.empty()) {
            fail(failure_reason::termination_unknown,
                 "no derivable transition for " + alpha.to_string());
            return false;
        }
        const step_successor& succ = sr.successors.front();
        rule_params rp;
        rp.index = static_cast<int>(target.index);
        rp.via_prog = alpha;
        rp.via_label = sigma;
        rp.via_prog2 = succ.prog;
        rp.via_label2 = succ.lab;
        auto cit = cfg.loop_certs.find(key);
        if (cit != cfg.loop_certs.end()) rp.term_cert = cit->second;
        try {
            g.apply(ctx, id, rule_id::dia_step, rp);
            return true;
        } catch (obligation_failed& e) {
            fail(failure_reason::termination_unknown, e.what());
            return false;
        }
    }

    auto_result run() {
        int64_t steps = 0;
        while (!failed) {
            int id = g.first_open();
            if (id < 0) break;
            if (static_cast<int64_t>(g.size()) > cfg.max_nodes || ++steps > 4 * cfg.max_nodes) {
                fail(failure_reason::budget_exceeded,
                     "node budget " + std::to_string(cfg.max_nodes) + " exhausted");
                break;
            }
            if (depth_of(id) > cfg.max_depth) {
                fail(failure_reason::budget_exceeded,
                     "depth budget " + std::to_string(cfg.max_depth) + " exhausted");
                break;
            }
            if (try_propositional(id)) continue;
            if (try_close(id)) continue;
            if (failed) break;
            auto target = dynamic_target(g.node(id).seq);
            if (!target) {
                fail(failure_reason::oracle_unknown,
                     "goal " + std::to_string(id) + " is stuck: " + g.node(id).seq.to_string());
                break;
            }
            if (try_backlink(id, *target)) continue;
            if (try_generalize(id, *target)) continue;
            if (try_step(id, *target)) continue;
            if (!failed)
                fail(failure_reason::no_backlink,
                     "no rule advances goal " + std::to_string(id));
        }

        auto_result out;
        out.graph = std::move(g);
        if (failed) {
            out.reason = *failed;
            out.detail = detail;
            return out;
        }
        proof_verdict pv = check_proof(ctx, out.graph);
        if (pv.accepted) {
            out.proved = true;
            return out;
        }
        // a closed graph the checker rejects: a diamond/left-box cycle without
        // termination evidence reads as TerminationUnknown
        bool has_unproved_dia = false;
        for (size_t i = 0; i < out.graph.size(); ++i) {
            const proof_node& n = out.graph.node(static_cast<int>(i));
            if (n.st == proof_node::status::closed &&
                (n.rule == rule_id::dia_step || n.rule == rule_id::box_l) &&
                !n.app.term_proof.has_value())
                has_unproved_dia = true;
        }
        out.reason =
            has_unproved_dia ? failure_reason::termination_unknown : failure_reason::no_backlink;
        out.detail = pv.reason;
        return out;
    }
};

} // namespace

auto_result auto_prove(inst_id inst, const sequent& goal, const search_config& cfg) {
    searcher s(inst, goal, cfg);
    return s.run();
}

} // namespace dlp
