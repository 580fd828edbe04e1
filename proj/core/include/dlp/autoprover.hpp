#pragma once

#include "dlp/cyclic.hpp"

namespace dlp {

struct search_config {
    int64_t max_nodes = 500;
    int64_t max_depth = 64;
    oracle_config oracle;
    int64_t alloc_base = 37;
    bool enable_generalization = true;
    // termination certificates keyed by the loop's printed program term
    std::map<std::string, termination_certificate> loop_certs;
};

enum class failure_reason { budget_exceeded, oracle_unknown, no_backlink, termination_unknown };

const char* failure_text(failure_reason r);

struct auto_result {
    bool proved = false;
    proof_graph graph; // partial on failure
    failure_reason reason = failure_reason::no_backlink;
    std::string detail;
};

// Heuristic proof search: propositional decomposition, oracle closing,
// back-link formation against generalized loop templates, anti-unification
// generalization, guard case-splits, symbolic steps. Successful results
// always pass check_proof.
auto_result auto_prove(inst_id inst, const sequent& goal, const search_config& cfg);

// The Sub proposal behind the generalization step: a common template for two
// loop-head labels plus the substitutions reproducing them.
struct generalize_proposal {
    store template_store;
    substitution theta_old, theta_new;
};
generalize_proposal loop_generalize(const store& old_label, const store& new_label,
                                    fresh_supply& fresh);

} // namespace dlp
