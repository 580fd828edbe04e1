#pragma once

#include "dlp/eval.hpp"
#include "dlp/sequent.hpp"

namespace dlp {

struct solver_process_error : std::runtime_error {
    explicit solver_process_error(const std::string& what) : std::runtime_error(what) {}
};

struct oracle_config {
    int64_t bound = 25;        // bounded backend sweeps [-bound, bound]^k
    std::string smt_path;      // external SMT-LIB solver; empty = bounded only
    static oracle_config from_env();
};

// Plain arithmetic entailment, labels already applied.
struct entailment_problem {
    std::vector<formula> hyps;
    std::vector<formula> goals;
    std::vector<std::string> vars;
    std::string to_string() const;
};

enum class verdict_kind { valid, counterexample, unknown };

struct oracle_verdict {
    verdict_kind kind = verdict_kind::unknown;
    std::string backend;            // "bounded" or "smt"
    bool bound_relative = false;    // bounded Valid is valid-in-the-box only
    int64_t bound = 0;
    ground_world cex;
    std::string reason;

    bool is_valid() const { return kind == verdict_kind::valid; }
    std::string to_string() const;
};

// Replaces every sigma:phi by apply_label(sigma, phi); the sequent's validity
// becomes validity of (and(hyps) -> or(goals)) universally closed over the
// remaining free variables. Non-dynamic formulas only.
entailment_problem ground_sequent(const sequent& s);

oracle_verdict check_validity(const entailment_problem& p, const oracle_config& cfg);
oracle_verdict check_sequent_validity(const sequent& s, const oracle_config& cfg);

enum class tri { yes, no, unknown };

// Guard decision for rule packs: yes when Gamma ==> sigma:guard is valid, no
// when Gamma ==> sigma:!guard is valid, unknown otherwise. Only non-dynamic
// members of Gamma contribute.
tri decide_guard(const std::vector<labeled_formula>& gamma, const label& l, const formula& guard,
                 const oracle_config& cfg);

} // namespace dlp
