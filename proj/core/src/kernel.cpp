#include "dlp/kernel.hpp"
#include "dlp/graph.hpp"

#include <algorithm>

namespace dlp {

const char* rule_name(rule_id r) {
    switch (r) {
    case rule_id::box_r: return "boxR";
    case rule_id::box_l: return "boxL";
    case rule_id::box_ter: return "boxTer";
    case rule_id::ter_close: return "close";
    case rule_id::sub: return "sub";
    case rule_id::ax: return "ax";
    case rule_id::cut: return "cut";
    case rule_id::wk_r: return "wkR";
    case rule_id::wk_l: return "wkL";
    case rule_id::con: return "con";
    case rule_id::neg_r: return "negR";
    case rule_id::neg_l: return "negL";
    case rule_id::and_r: return "andR";
    case rule_id::and_l: return "andL";
    case rule_id::or_l: return "orL";
    case rule_id::or_r: return "orR";
    case rule_id::imp_r: return "impR";
    case rule_id::imp_l: return "impL";
    case rule_id::dia_step: return "dia";
    case rule_id::dia_ter: return "diaTer";
    case rule_id::le: return "le";
    case rule_id::lifted_seq: return "liftSeq";
    case rule_id::lifted_gen: return "liftGen";
    case rule_id::sl_star: return "slstar";
    case rule_id::sl_frame: return "slframe";
    case rule_id::temp_first: return "tfirst";
    case rule_id::temp_suf_r1: return "tsufR1";
    case rule_id::temp_suf_r2: return "tsufR2";
    case rule_id::temp_suf_l: return "tsufL";
    }
    return "?";
}

std::optional<rule_id> rule_from_name(const std::string& s) {
    static const std::pair<const char*, rule_id> table[] = {
        {"boxR", rule_id::box_r},     {"boxL", rule_id::box_l},
        {"boxTer", rule_id::box_ter}, {"close", rule_id::ter_close},
        {"sub", rule_id::sub},        {"ax", rule_id::ax},
        {"cut", rule_id::cut},        {"wkR", rule_id::wk_r},
        {"wkL", rule_id::wk_l},       {"con", rule_id::con},
        {"negR", rule_id::neg_r},     {"negL", rule_id::neg_l},
        {"andR", rule_id::and_r},     {"andL", rule_id::and_l},
        {"orL", rule_id::or_l},       {"orR", rule_id::or_r},
        {"impR", rule_id::imp_r},     {"impL", rule_id::imp_l},
        {"dia", rule_id::dia_step},   {"diaTer", rule_id::dia_ter},
        {"le", rule_id::le},          {"liftSeq", rule_id::lifted_seq},
        {"liftGen", rule_id::lifted_gen}, {"slstar", rule_id::sl_star},
        {"slframe", rule_id::sl_frame},   {"tfirst", rule_id::temp_first},
        {"tsufR1", rule_id::temp_suf_r1}, {"tsufR2", rule_id::temp_suf_r2},
        {"tsufL", rule_id::temp_suf_l}};
    for (auto& [n, r] : table)
        if (s == n) return r;
    return std::nullopt;
}

namespace {

// Builds a premise from the conclusion while recording the induced CP map.
struct premise_builder {
    const sequent& goal;
    sequent prem;
    std::vector<cp_pair> map;
    // per premise formula: originating conclusion occurrence, if any
    std::vector<std::optional<occurrence>> origin_left, origin_right;

    explicit premise_builder(const sequent& g) : goal(g), prem(g) {
        for (size_t i = 0; i < g.left.size(); ++i) origin_left.push_back(occurrence{true, i});
        for (size_t i = 0; i < g.right.size(); ++i) origin_right.push_back(occurrence{false, i});
    }

    void remove(occurrence occ) {
        auto& fs = occ.left ? prem.left : prem.right;
        auto& org = occ.left ? origin_left : origin_right;
        size_t pos = find_pos(occ);
        fs.erase(fs.begin() + pos);
        org.erase(org.begin() + pos);
    }

    // replaces the formula at a conclusion occurrence; extra formulas from the
    // same target can be appended with append_target
    void replace(occurrence occ, labeled_formula lf, bool progressive = false,
                 bool sub_peel = false) {
        size_t pos = find_pos(occ);
        auto& fs = occ.left ? prem.left : prem.right;
        fs[pos] = std::move(lf);
        auto& org = occ.left ? origin_left : origin_right;
        org[pos] = std::nullopt; // target pair recorded explicitly
        map.push_back({occ, {occ.left, pos}, true, sub_peel, progressive});
    }

    void append_target(occurrence from, bool to_left, labeled_formula lf) {
        auto& fs = to_left ? prem.left : prem.right;
        fs.push_back(std::move(lf));
        (to_left ? origin_left : origin_right).push_back(std::nullopt);
        map.push_back({from, {to_left, fs.size() - 1}, true, false, false});
    }

    void append_fresh(bool to_left, labeled_formula lf) {
        auto& fs = to_left ? prem.left : prem.right;
        fs.push_back(std::move(lf));
        (to_left ? origin_left : origin_right).push_back(std::nullopt);
    }

    std::pair<sequent, std::vector<cp_pair>> finish() {
        for (size_t i = 0; i < prem.left.size(); ++i)
            if (origin_left[i]) map.push_back({*origin_left[i], {true, i}, false, false, false});
        for (size_t i = 0; i < prem.right.size(); ++i)
            if (origin_right[i]) map.push_back({*origin_right[i], {false, i}, false, false, false});
        return {std::move(prem), std::move(map)};
    }

private:
    size_t find_pos(occurrence occ) const {
        auto& org = occ.left ? origin_left : origin_right;
        for (size_t i = 0; i < org.size(); ++i)
            if (org[i] && *org[i] == occ) return i;
        throw std::logic_error("conclusion occurrence already consumed");
    }
};

const labeled_formula& at(const sequent& s, occurrence occ) {
    auto& fs = occ.left ? s.left : s.right;
    if (occ.index >= fs.size()) throw not_applicable("occurrence index out of range");
    return fs[occ.index];
}

occurrence find_occ(const sequent& goal, bool left, int index,
                    const std::function<bool(const labeled_formula&)>& pred,
                    const char* what) {
    const auto& fs = left ? goal.left : goal.right;
    if (index >= 0) {
        occurrence occ{left, static_cast<size_t>(index)};
        if (occ.index >= fs.size() || !pred(fs[occ.index]))
            throw not_applicable(std::string("no ") + what + " at the given index");
        return occ;
    }
    for (size_t i = 0; i < fs.size(); ++i)
        if (pred(fs[i])) return {left, i};
    throw not_applicable(std::string("no ") + what + " in the goal");
}

bool side_is_left(const rule_params& p, bool default_left) {
    if (p.side == "left") return true;
    if (p.side == "right") return false;
    return default_left;
}

occurrence find_occ_either(const sequent& goal, const rule_params& p,
                           const std::function<bool(const labeled_formula&)>& pred,
                           const char* what) {
    if (!p.side.empty())
        return find_occ(goal, side_is_left(p, false), p.index, pred, what);
    // right side first, then left
    const auto& rs = goal.right;
    if (p.index < 0) {
        for (size_t i = 0; i < rs.size(); ++i)
            if (pred(rs[i])) return {false, i};
        for (size_t i = 0; i < goal.left.size(); ++i)
            if (pred(goal.left[i])) return {true, i};
        throw not_applicable(std::string("no ") + what + " in the goal");
    }
    return find_occ(goal, false, p.index, pred, what);
}

bool is_labeled_kind(const labeled_formula& lf, formula_kind k) {
    return lf.kind() == labeled_kind::labeled && lf.fml().kind() == k;
}

proof_obligation discharge(const pack_context& ctx, sequent s, const std::string& origin) {
    oracle_verdict v = check_sequent_validity(s, ctx.oracle);
    if (!v.is_valid())
        throw obligation_failed(origin + ": " + v.to_string() + " for " + s.to_string());
    return proof_obligation{std::move(s), std::move(v), origin};
}

std::vector<labeled_formula> nondynamic_left(const sequent& goal) {
    std::vector<labeled_formula> out;
    for (auto& lf : goal.left)
        if (lf.kind() == labeled_kind::labeled && !lf.fml().is_dynamic()) out.push_back(lf);
    return out;
}

label seq_tail_label(const label& l) {
    if (!l.is_seq()) throw not_applicable("store-sequence label expected");
    const store_seq& s = l.as_seq();
    if (s.elems.size() == 2) return label(s.elems[1]);
    store_seq rest;
    rest.elems.assign(s.elems.begin() + 1, s.elems.end());
    return label(std::move(rest));
}

} // namespace

rule_application apply_rule(const pack_context& ctx, const sequent& goal, rule_id rule,
                            const rule_params& params) {
    rule_application app;
    app.rule = rule;
    app.params = params;

    auto push_premise = [&](premise_builder&& b) {
        auto [prem, map] = b.finish();
        app.premises.push_back(std::move(prem));
        app.cp_maps.push_back(std::move(map));
    };

    switch (rule) {
    case rule_id::box_r: {
        occurrence occ = find_occ(goal, false, params.index, [](const labeled_formula& lf) {
            return is_labeled_kind(lf, formula_kind::box) && !lf.fml().prog().is_ter();
        }, "right box formula");
        app.params.index = static_cast<int>(occ.index);
        app.params.side = "right";
        const labeled_formula& tgt = at(goal, occ);
        const program& alpha = tgt.fml().prog();
        step_result sr = step(ctx, goal.left, alpha, tgt.lab());
        if (!sr.exhaustive)
            throw missing_exhaustiveness(
                "undecided guard " +
                (sr.undecided_guard ? sr.undecided_guard->to_string() : std::string("?")) +
                "; case-split first");
        auto gamma = nondynamic_left(goal);
        for (auto& succ : sr.successors) {
            premise_builder b(goal);
            b.replace(occ, labeled_formula::labeled(succ.lab, formula::box(succ.prog, tgt.fml().arg0())),
                      /*progressive=*/true);
            push_premise(std::move(b));
            app.step_tags.push_back(succ.rule_tag);
            for (auto& g : succ.guards) {
                sequent ob;
                ob.left = gamma;
                ob.right.push_back(g);
                app.obligations.push_back(discharge(ctx, std::move(ob), "guard"));
            }
        }
        return app;
    }
    case rule_id::box_l:
    case rule_id::dia_step: {
        bool left = rule == rule_id::box_l;
        formula_kind want = left ? formula_kind::box : formula_kind::dia;
        if (!params.via_prog || !params.via_label || !params.via_prog2 || !params.via_label2)
            throw not_applicable("boxL/dia need a transition parameter");
        const program& alpha = *params.via_prog;
        const label& sigma = *params.via_label;
        occurrence occ = find_occ(goal, left, params.index, [&](const labeled_formula& lf) {
            return lf.kind() == labeled_kind::labeled && lf.fml().kind() == want &&
                   !lf.fml().prog().is_ter() && lf.fml().prog() == alpha && lf.lab() == sigma;
        }, left ? "left box formula matching the transition" : "diamond matching the transition");
        app.params.index = static_cast<int>(occ.index);
        app.params.side = left ? "left" : "right";
        const labeled_formula& tgt = at(goal, occ);
        // the chosen transition must be derivable from the rule pack
        step_result sr = step(ctx, goal.left, alpha, sigma);
        const step_successor* found = nullptr;
        program want_prog = params.via_prog2->normalized();
        label want_lab = params.via_label2->substitute({});
        for (auto& succ : sr.successors)
            if (succ.prog.normalized() == want_prog && succ.lab.substitute({}) == want_lab) {
                found = &succ;
                break;
            }
        if (!found)
            throw not_applicable("transition is not derivable here" +
                                 std::string(sr.exhaustive ? "" : " (guard undecided)"));
        auto gamma = nondynamic_left(goal);
        for (auto& g : found->guards) {
            sequent ob;
            ob.left = gamma;
            ob.right.push_back(g);
            app.obligations.push_back(discharge(ctx, std::move(ob), "guard"));
        }
        bool progressive = false;
        if (params.term_cert) {
            auto proof = terminates(ctx, goal.left, alpha, sigma, params.term_cert);
            if (!proof)
                throw obligation_failed("termination certificate failed: " +
                                        params.term_cert->to_string());
            app.term_proof = std::move(proof);
            progressive = true;
        }
        premise_builder b(goal);
        formula next = left ? formula::box(found->prog, tgt.fml().arg0())
                            : formula::dia(found->prog, tgt.fml().arg0());
        b.replace(occ, labeled_formula::labeled(found->lab, std::move(next)), progressive);
        push_premise(std::move(b));
        return app;
    }
    case rule_id::box_ter:
    case rule_id::dia_ter: {
        formula_kind want = rule == rule_id::box_ter ? formula_kind::box : formula_kind::dia;
        occurrence occ = find_occ_either(goal, params, [&](const labeled_formula& lf) {
            return lf.kind() == labeled_kind::labeled && lf.fml().kind() == want &&
                   lf.fml().prog().is_ter();
        }, "terminal-program modality");
        app.params.index = static_cast<int>(occ.index);
        app.params.side = occ.left ? "left" : "right";
        premise_builder b(goal);
        b.replace(occ, labeled_formula::labeled(at(goal, occ).lab(), at(goal, occ).fml().arg0()));
        push_premise(std::move(b));
        return app;
    }
    case rule_id::ter_close: {
        for (auto& fs : {goal.left, goal.right})
            for (auto& lf : fs)
                if (lf.kind() != labeled_kind::labeled || lf.fml().is_dynamic())
                    throw not_applicable("close needs a fully non-dynamic sequent");
        app.obligations.push_back(discharge(ctx, goal, "ter"));
        return app;
    }
    case rule_id::ax: {
        for (auto& lf : goal.left) {
            if (lf.kind() != labeled_kind::labeled) continue;
            labeled_formula n = lf.normalized();
            for (auto& rf : goal.right)
                if (rf.kind() == labeled_kind::labeled && rf.normalized() == n) return app;
        }
        throw not_applicable("no matching formula on both sides");
    }
    case rule_id::cut: {
        if (!params.cut_formula) throw not_applicable("cut needs a formula");
        premise_builder lemma(goal);
        lemma.append_fresh(false, *params.cut_formula);
        push_premise(std::move(lemma));
        premise_builder main(goal);
        main.append_fresh(true, *params.cut_formula);
        push_premise(std::move(main));
        return app;
    }
    case rule_id::wk_l:
    case rule_id::wk_r: {
        bool left = rule == rule_id::wk_l;
        if (params.index < 0) throw not_applicable("weakening needs an index");
        occurrence occ{left, static_cast<size_t>(params.index)};
        at(goal, occ);
        premise_builder b(goal);
        b.remove(occ);
        push_premise(std::move(b));
        return app;
    }
    case rule_id::con: {
        bool left = side_is_left(params, true);
        if (params.index < 0) throw not_applicable("contraction needs an index");
        occurrence occ{left, static_cast<size_t>(params.index)};
        const labeled_formula lf = at(goal, occ);
        premise_builder b(goal);
        b.append_fresh(left, lf);
        push_premise(std::move(b));
        return app;
    }
    case rule_id::neg_r:
    case rule_id::neg_l: {
        bool left = rule == rule_id::neg_l;
        occurrence occ = find_occ(goal, left, params.index, [](const labeled_formula& lf) {
            return is_labeled_kind(lf, formula_kind::neg);
        }, "negation");
        app.params.index = static_cast<int>(occ.index);
        const labeled_formula tgt = at(goal, occ);
        premise_builder b(goal);
        b.remove(occ);
        b.append_target(occ, !left, labeled_formula::labeled(tgt.lab(), tgt.fml().arg0()));
        push_premise(std::move(b));
        return app;
    }
    case rule_id::and_r: {
        occurrence occ = find_occ(goal, false, params.index, [](const labeled_formula& lf) {
            return is_labeled_kind(lf, formula_kind::conj);
        }, "right conjunction");
        app.params.index = static_cast<int>(occ.index);
        const labeled_formula tgt = at(goal, occ);
        for (int i = 0; i < 2; ++i) {
            premise_builder b(goal);
            b.replace(occ, labeled_formula::labeled(tgt.lab(), i == 0 ? tgt.fml().arg0()
                                                                      : tgt.fml().arg1()));
            push_premise(std::move(b));
        }
        return app;
    }
    case rule_id::and_l: {
        occurrence occ = find_occ(goal, true, params.index, [](const labeled_formula& lf) {
            return is_labeled_kind(lf, formula_kind::conj);
        }, "left conjunction");
        app.params.index = static_cast<int>(occ.index);
        const labeled_formula tgt = at(goal, occ);
        premise_builder b(goal);
        b.replace(occ, labeled_formula::labeled(tgt.lab(), tgt.fml().arg0()));
        b.append_target(occ, true, labeled_formula::labeled(tgt.lab(), tgt.fml().arg1()));
        push_premise(std::move(b));
        return app;
    }
    case rule_id::or_l: {
        occurrence occ = find_occ(goal, true, params.index, [](const labeled_formula& lf) {
            return is_labeled_kind(lf, formula_kind::disj);
        }, "left disjunction");
        app.params.index = static_cast<int>(occ.index);
        const labeled_formula tgt = at(goal, occ);
        for (int i = 0; i < 2; ++i) {
            premise_builder b(goal);
            b.replace(occ, labeled_formula::labeled(tgt.lab(), i == 0 ? tgt.fml().arg0()
                                                                      : tgt.fml().arg1()));
            push_premise(std::move(b));
        }
        return app;
    }
    case rule_id::or_r: {
        occurrence occ = find_occ(goal, false, params.index, [](const labeled_formula& lf) {
            return is_labeled_kind(lf, formula_kind::disj);
        }, "right disjunction");
        app.params.index = static_cast<int>(occ.index);
        const labeled_formula tgt = at(goal, occ);
        premise_builder b(goal);
        b.replace(occ, labeled_formula::labeled(tgt.lab(), tgt.fml().arg0()));
        b.append_target(occ, false, labeled_formula::labeled(tgt.lab(), tgt.fml().arg1()));
        push_premise(std::move(b));
        return app;
    }
    case rule_id::imp_r: {
        occurrence occ = find_occ(goal, false, params.index, [](const labeled_formula& lf) {
            return is_labeled_kind(lf, formula_kind::impl);
        }, "right implication");
        app.params.index = static_cast<int>(occ.index);
        const labeled_formula tgt = at(goal, occ);
        premise_builder b(goal);
        b.replace(occ, labeled_formula::labeled(tgt.lab(), tgt.fml().arg1()));
        b.append_target(occ, true, labeled_formula::labeled(tgt.lab(), tgt.fml().arg0()));
        push_premise(std::move(b));
        return app;
    }
    case rule_id::imp_l: {
        occurrence occ = find_occ(goal, true, params.index, [](const labeled_formula& lf) {
            return is_labeled_kind(lf, formula_kind::impl);
        }, "left implication");
        app.params.index = static_cast<int>(occ.index);
        const labeled_formula tgt = at(goal, occ);
        premise_builder b1(goal);
        b1.remove(occ);
        b1.append_target(occ, false, labeled_formula::labeled(tgt.lab(), tgt.fml().arg0()));
        push_premise(std::move(b1));
        premise_builder b2(goal);
        b2.replace(occ, labeled_formula::labeled(tgt.lab(), tgt.fml().arg1()));
        push_premise(std::move(b2));
        return app;
    }
    case rule_id::sub: {
        if (!params.sub_template) throw not_applicable("sub needs a template sequent");
        substitution theta;
        if (params.sub_theta) {
            theta = *params.sub_theta;
        } else {
            auto found = match_label(*params.sub_template, goal);
            if (!found) throw not_applicable("no substitution matches the template");
            theta = *found;
        }
        sequent inst = params.sub_template->substitute(theta);
        if (!inst.same_as(goal))
            throw not_applicable("substituted template does not equal the goal");
        app.params.sub_theta = theta;
        // pair each goal occurrence with a template occurrence it instantiates
        std::vector<cp_pair> map;
        auto pair_side = [&](bool left) {
            const auto& gfs = left ? goal.left : goal.right;
            const auto& tfs = left ? params.sub_template->left : params.sub_template->right;
            std::vector<bool> used(tfs.size(), false);
            for (size_t i = 0; i < gfs.size(); ++i) {
                labeled_formula want = gfs[i].normalized();
                for (size_t j = 0; j < tfs.size(); ++j) {
                    if (used[j]) continue;
                    if (tfs[j].substitute(theta).normalized() == want) {
                        used[j] = true;
                        map.push_back({{left, i}, {left, j}, false, true, false});
                        break;
                    }
                }
            }
        };
        pair_side(true);
        pair_side(false);
        if (map.size() != goal.left.size() + goal.right.size())
            throw not_applicable("template/goal occurrence pairing failed");
        app.premises.push_back(*params.sub_template);
        app.cp_maps.push_back(std::move(map));
        return app;
    }
    case rule_id::le: {
        if (!params.le_formula) throw not_applicable("le needs a formula");
        if (params.index < 0) throw not_applicable("le needs a left index");
        occurrence occ{true, static_cast<size_t>(params.index)};
        const labeled_formula tgt = at(goal, occ);
        if (tgt.kind() != labeled_kind::labeled || tgt.fml().is_dynamic())
            throw not_applicable("le replaces a non-dynamic left formula");
        if (params.le_formula->is_dynamic()) throw not_applicable("le target must be non-dynamic");
        sequent ob;
        ob.left.push_back(tgt);
        ob.right.push_back(labeled_formula::labeled(tgt.lab(), *params.le_formula));
        app.obligations.push_back(discharge(ctx, std::move(ob), "le"));
        premise_builder b(goal);
        b.replace(occ, labeled_formula::labeled(tgt.lab(), *params.le_formula));
        push_premise(std::move(b));
        return app;
    }
    case rule_id::lifted_seq: {
        occurrence occ = find_occ(goal, false, params.index, [](const labeled_formula& lf) {
            return is_labeled_kind(lf, formula_kind::box) &&
                   lf.fml().prog().kind() == program_kind::seq && lf.lab().is_store();
        }, "right [a;b] formula under a store label");
        app.params.index = static_cast<int>(occ.index);
        const labeled_formula tgt = at(goal, occ);
        const store& lab = params.lift_label ? *params.lift_label : tgt.lab().as_store();
        if (!(label(lab) == tgt.lab())) throw not_applicable("lift label differs from the goal's");
        const program& ab = tgt.fml().prog();
        formula unfolded =
            formula::box(ab.p0(), formula::box(ab.p1(), tgt.fml().arg0()));
        if (!is_free_label(lab, {tgt.fml(), unfolded}))
            throw freeness_violation("label is not free for the sequenced formulas");
        premise_builder b(goal);
        b.replace(occ, labeled_formula::labeled(tgt.lab(), std::move(unfolded)));
        push_premise(std::move(b));
        return app;
    }
    case rule_id::lifted_gen: {
        if (goal.left.size() != 1 || goal.right.size() != 1)
            throw not_applicable("liftGen expects sigma:[a]phi |- sigma:[a]psi");
        const labeled_formula& l = goal.left[0];
        const labeled_formula& r = goal.right[0];
        if (!is_labeled_kind(l, formula_kind::box) || !is_labeled_kind(r, formula_kind::box) ||
            !(l.lab() == r.lab()) || !(l.fml().prog() == r.fml().prog()) || !l.lab().is_store())
            throw not_applicable("liftGen expects sigma:[a]phi |- sigma:[a]psi");
        const store& lab = params.lift_label ? *params.lift_label : l.lab().as_store();
        if (!(label(lab) == l.lab())) throw not_applicable("lift label differs from the goal's");
        if (!is_free_label(lab, {l.fml(), r.fml(), l.fml().arg0(), r.fml().arg0()}))
            throw freeness_violation("label is not free for the generated formulas");
        premise_builder b(goal);
        b.replace({true, 0}, labeled_formula::labeled(l.lab(), l.fml().arg0()));
        b.replace({false, 0}, labeled_formula::labeled(r.lab(), r.fml().arg0()));
        push_premise(std::move(b));
        return app;
    }
    case rule_id::sl_star: {
        occurrence occ = find_occ(goal, false, params.index, [](const labeled_formula& lf) {
            return is_labeled_kind(lf, formula_kind::sep) && lf.lab().is_heap();
        }, "right ** formula under a store-heap label");
        app.params.index = static_cast<int>(occ.index);
        const labeled_formula tgt = at(goal, occ);
        if (!params.heap_split) throw not_applicable("slstar needs a heap split");
        const store_heap& sh = tgt.lab().as_heap();
        store_heap h1{sh.vars, *params.heap_split}, h2{sh.vars, {}};
        for (auto& [a, v] : sh.heap) {
            auto it = h1.heap.find(a);
            if (it == h1.heap.end())
                h2.heap[a] = v;
            else if (it->second != v)
                throw not_applicable("heap split disagrees with the goal heap");
        }
        for (auto& [a, v] : h1.heap)
            if (!sh.heap.count(a)) throw not_applicable("heap split is not a sub-heap");
        // disjointness holds by construction; record it as a discharged
        // structural obligation
        proof_obligation ob;
        ob.origin = "heap-disjoint";
        ob.seq.right.push_back(labeled_formula::labeled(tgt.lab(), formula::bool_lit(true)));
        ob.verdict.kind = verdict_kind::valid;
        ob.verdict.backend = "structural";
        app.obligations.push_back(std::move(ob));
        premise_builder b1(goal);
        b1.replace(occ, labeled_formula::labeled(label(h1), tgt.fml().arg0()));
        push_premise(std::move(b1));
        premise_builder b2(goal);
        b2.replace(occ, labeled_formula::labeled(label(h2), tgt.fml().arg1()));
        push_premise(std::move(b2));
        return app;
    }
    case rule_id::sl_frame: {
        occurrence occ = find_occ(goal, false, params.index, [](const labeled_formula& lf) {
            return is_labeled_kind(lf, formula_kind::sep) && lf.lab().is_heap();
        }, "right ** formula under a store-heap label");
        app.params.index = static_cast<int>(occ.index);
        const labeled_formula tgt = at(goal, occ);
        const store_heap& sh = tgt.lab().as_heap();
        const formula& psi = tgt.fml().arg1();
        // printed side condition: no variable holding an address of dom(h)
        // occurs in psi; strengthened with the empty-heap check, without
        // which the rule is locally unsound
        std::set<std::string> psi_vars = psi.vars();
        for (auto& [x, v] : sh.vars)
            if (sh.heap.count(v) && psi_vars.count(x))
                throw not_applicable("frame: " + x + " addresses the framed heap");
        store_heap empty{sh.vars, {}};
        if (!eval_sl_formula(empty, psi))
            throw not_applicable("frame: framed formula fails in the empty heap");
        premise_builder b(goal);
        b.replace(occ, labeled_formula::labeled(tgt.lab(), tgt.fml().arg0()));
        push_premise(std::move(b));
        return app;
    }
    case rule_id::temp_first: {
        occurrence occ = find_occ_either(goal, params, [](const labeled_formula& lf) {
            return is_labeled_kind(lf, formula_kind::tfirst);
        }, "'first' formula");
        app.params.index = static_cast<int>(occ.index);
        app.params.side = occ.left ? "left" : "right";
        const labeled_formula tgt = at(goal, occ);
        label head = tgt.lab().is_seq() ? label(tgt.lab().as_seq().head()) : tgt.lab();
        premise_builder b(goal);
        b.replace(occ, labeled_formula::labeled(std::move(head), tgt.fml().arg0()));
        push_premise(std::move(b));
        return app;
    }
    case rule_id::temp_suf_r1:
    case rule_id::temp_suf_r2: {
        occurrence occ = find_occ(goal, false, params.index, [](const labeled_formula& lf) {
            return is_labeled_kind(lf, formula_kind::suffix) && lf.lab().is_seq();
        }, "right Suf formula over a store sequence");
        app.params.index = static_cast<int>(occ.index);
        const labeled_formula tgt = at(goal, occ);
        label rest = seq_tail_label(tgt.lab());
        if (rule == rule_id::temp_suf_r2) {
            premise_builder b(goal);
            b.replace(occ, labeled_formula::labeled(rest, tgt.fml().arg1()));
            push_premise(std::move(b));
        } else {
            premise_builder b1(goal);
            b1.replace(occ, labeled_formula::labeled(rest, tgt.fml().arg0()));
            push_premise(std::move(b1));
            premise_builder b2(goal);
            b2.replace(occ, labeled_formula::labeled(rest, tgt.fml()));
            push_premise(std::move(b2));
        }
        return app;
    }
    case rule_id::temp_suf_l: {
        occurrence occ = find_occ(goal, true, params.index, [](const labeled_formula& lf) {
            return is_labeled_kind(lf, formula_kind::suffix) && lf.lab().is_seq();
        }, "left Suf formula over a store sequence");
        app.params.index = static_cast<int>(occ.index);
        const labeled_formula tgt = at(goal, occ);
        label rest = seq_tail_label(tgt.lab());
        premise_builder b1(goal);
        b1.replace(occ, labeled_formula::labeled(rest, tgt.fml().arg0()));
        b1.append_target(occ, true, labeled_formula::labeled(rest, tgt.fml()));
        push_premise(std::move(b1));
        premise_builder b2(goal);
        b2.replace(occ, labeled_formula::labeled(rest, tgt.fml().arg1()));
        push_premise(std::move(b2));
        return app;
    }
    }
    throw std::logic_error("unreachable");
}

lifted_rule lift_rule(const plain_rule& rule, const store& lab) {
    std::vector<formula> all;
    auto add = [&](const plain_sequent& s) {
        for (auto& f : s.left) all.push_back(f);
        for (auto& f : s.right) all.push_back(f);
    };
    add(rule.conclusion);
    for (auto& p : rule.premises) add(p);
    if (!is_free_label(lab, all))
        throw freeness_violation("label is not free for the rule's formulas");
    auto lift = [&](const plain_sequent& s) {
        sequent out;
        for (auto& f : s.left) out.left.push_back(labeled_formula::labeled(label(lab), f));
        for (auto& f : s.right) out.right.push_back(labeled_formula::labeled(label(lab), f));
        return out;
    };
    lifted_rule out;
    out.lab = lab;
    out.conclusion = lift(rule.conclusion);
    for (auto& p : rule.premises) out.premises.push_back(lift(p));
    return out;
}

std::pair<int, int> guard_case_split(const pack_context& ctx, proof_graph& g, int goal) {
    const sequent& s = g.node(goal).seq;
    // locate the undecided guard of the first stepped modality
    std::optional<formula> guard;
    label at_label;
    for (auto& fs : {s.right, s.left}) {
        for (auto& lf : fs) {
            if (lf.kind() != labeled_kind::labeled) continue;
            const formula& f = lf.fml();
            if ((f.kind() == formula_kind::box || f.kind() == formula_kind::dia) &&
                !f.prog().is_ter()) {
                step_result sr = step(ctx, s.left, f.prog(), lf.lab());
                if (!sr.exhaustive && sr.undecided_guard) {
                    guard = sr.undecided_guard;
                    at_label = sr.undecided_label;
                    break;
                }
            }
        }
        if (guard) break;
    }
    if (!guard) throw not_applicable("no undecided guard to split on");

    rule_params cut_p;
    cut_p.cut_formula = labeled_formula::labeled(
        at_label, formula::disj(*guard, formula::neg(*guard)));
    auto kids = g.apply(ctx, goal, rule_id::cut, cut_p);
    int lemma = kids[0], main = kids[1];

    // close the tautology branch: weaken everything else away, then Ter
    while (g.node(lemma).seq.right.size() > 1) {
        rule_params wk;
        wk.index = 0;
        lemma = g.apply(ctx, lemma, rule_id::wk_r, wk)[0];
    }
    while (!g.node(lemma).seq.left.empty()) {
        rule_params wk;
        wk.index = 0;
        lemma = g.apply(ctx, lemma, rule_id::wk_l, wk)[0];
    }
    g.apply(ctx, lemma, rule_id::ter_close, {});

    rule_params orl;
    orl.index = static_cast<int>(g.node(main).seq.left.size()) - 1;
    auto branches = g.apply(ctx, main, rule_id::or_l, orl);
    return {branches[0], branches[1]};
}

} // namespace dlp
