#pragma once

#include "dlp/instantiations.hpp"

namespace dlp {

struct not_applicable : std::runtime_error {
    explicit not_applicable(const std::string& what) : std::runtime_error(what) {}
};
struct missing_exhaustiveness : std::runtime_error {
    explicit missing_exhaustiveness(const std::string& what) : std::runtime_error(what) {}
};
struct freeness_violation : std::runtime_error {
    explicit freeness_violation(const std::string& what) : std::runtime_error(what) {}
};
struct obligation_failed : std::runtime_error {
    explicit obligation_failed(const std::string& what) : std::runtime_error(what) {}
};

enum class rule_id {
    box_r,
    box_l,
    box_ter,
    ter_close,
    sub,
    ax,
    cut,
    wk_r,
    wk_l,
    con,
    neg_r,
    neg_l,
    and_r,
    and_l,
    // derived
    or_l,
    or_r,
    imp_r,
    imp_l,
    dia_step,
    dia_ter,
    le,
    lifted_seq,
    lifted_gen,
    sl_star,
    sl_frame,
    temp_first,
    temp_suf_r1,
    temp_suf_r2,
    temp_suf_l
};

const char* rule_name(rule_id r);
std::optional<rule_id> rule_from_name(const std::string& s);

struct rule_params {
    int index = -1;    // occurrence index on `side` (resolved during apply)
    std::string side;  // "left" / "right" where a rule works on either side

    // box_l / dia_step
    std::optional<program> via_prog, via_prog2;
    std::optional<label> via_label, via_label2;
    std::optional<termination_certificate> term_cert;

    std::optional<labeled_formula> cut_formula; // cut
    std::optional<sequent> sub_template;        // sub
    std::optional<substitution> sub_theta;      // sub
    std::optional<formula> le_formula;          // le
    std::optional<store> lift_label;            // lifted_seq / lifted_gen
    std::optional<std::map<int64_t, int64_t>> heap_split; // sl_star: h1
};

// Position of a formula occurrence in a sequent.
struct occurrence {
    bool left = false;
    size_t index = 0;
    bool operator==(const occurrence& o) const { return left == o.left && index == o.index; }
};

// Conclusion-premise formula pairing with a progress mark.
struct cp_pair {
    occurrence from, to;
    bool target = false;      // target replacement (trace case 1)
    bool sub_peel = false;    // Sub(sigma):phi -> sigma:phi (trace case 2)
    bool progressive = false;
};

struct proof_obligation {
    sequent seq;
    oracle_verdict verdict;
    std::string origin;
};

struct rule_application {
    rule_id rule = rule_id::ax;
    rule_params params;
    std::vector<sequent> premises;
    std::vector<std::vector<cp_pair>> cp_maps; // one map per premise
    std::vector<proof_obligation> obligations;
    std::optional<termination_proof> term_proof;
    std::vector<std::string> step_tags; // box_r bookkeeping
};

// Applies one kernel rule to a goal, producing premises, CP maps and side
// obligations. Every oracle obligation is discharged here; a refuted or
// unknown obligation throws obligation_failed.
rule_application apply_rule(const pack_context& ctx, const sequent& goal, rule_id rule,
                            const rule_params& params);

// Rules over unlabeled formulas and their sigma-labeled lifts.
struct plain_sequent {
    std::vector<formula> left, right;
};
struct plain_rule {
    plain_sequent conclusion;
    std::vector<plain_sequent> premises;
};
struct lifted_rule {
    store lab;
    sequent conclusion;
    std::vector<sequent> premises;
};

// Lifts a sound unlabeled rule to its labeled version; sound whenever the
// label is free for every formula of the rule. Throws freeness_violation.
lifted_rule lift_rule(const plain_rule& rule, const store& lab);

class proof_graph;

// Emits Cut on sigma:(phi || !phi) followed by OrL on an undecided guard,
// closing the tautology branch through the oracle; returns the two open
// goals whose contexts decide the guard.
std::pair<int, int> guard_case_split(const pack_context& ctx, proof_graph& g, int goal);

} // namespace dlp
