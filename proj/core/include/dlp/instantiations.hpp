#pragma once

#include "dlp/inst.hpp"
#include "dlp/oracle.hpp"

#include <optional>
#include <variant>

namespace dlp {

struct kind_mismatch : std::runtime_error {
    explicit kind_mismatch(const std::string& what) : std::runtime_error(what) {}
};

struct pack_context {
    inst_id inst = inst_id::wp;
    oracle_config oracle;
    int64_t alloc_base = 37;
};

// ---------------------------------------------------------------------------
// Symbolic one-step relation (the PfOper rule packs).
// ---------------------------------------------------------------------------

struct step_successor {
    program prog;
    label lab;
    std::vector<labeled_formula> guards; // discharged side conditions
    std::string rule_tag;
};

struct step_result {
    std::vector<step_successor> successors;
    bool exhaustive = true;                 // certificate flag for [alpha]R
    std::optional<formula> undecided_guard; // structured outcome, not a failure
    label undecided_label;                  // store the split must happen at
};

step_result step(const pack_context& ctx, const std::vector<labeled_formula>& gamma,
                 const program& alpha, const label& sigma);

// ---------------------------------------------------------------------------
// Concrete reference interpreters.
// ---------------------------------------------------------------------------

struct pl_world {
    std::vector<ground_world> path; // nonempty

    bool operator==(const pl_world& o) const { return path == o.path; }
    bool operator<(const pl_world& o) const { return path < o.path; }
};

class world {
public:
    world() : m_v(ground_world{}) {}
    world(ground_world w) : m_v(std::move(w)) {}
    world(pl_world w);
    world(store_heap w) : m_v(std::move(w)) {}

    bool is_map() const { return std::holds_alternative<ground_world>(m_v); }
    bool is_path() const { return std::holds_alternative<pl_world>(m_v); }
    bool is_heap() const { return std::holds_alternative<store_heap>(m_v); }
    const ground_world& as_map() const { return std::get<ground_world>(m_v); }
    const pl_world& as_path() const { return std::get<pl_world>(m_v); }
    const store_heap& as_heap() const { return std::get<store_heap>(m_v); }

    bool operator==(const world& o) const { return m_v == o.m_v; }
    bool operator<(const world& o) const { return m_v < o.m_v; }
    std::string to_string() const;

private:
    std::variant<ground_world, pl_world, store_heap> m_v;
};

// One small step of the concrete relation; independent of step().
std::vector<std::pair<program, world>> one_step(const pack_context& ctx, const program& alpha,
                                                const world& w);

struct run_result {
    std::vector<world> finals; // deduplicated, sorted
    bool budget_exceeded = false;
    std::vector<std::pair<program, world>> trace; // deterministic runs only
};

run_result run_to_completion(const pack_context& ctx, const program& alpha, const world& w,
                             int64_t budget);

// Structural evaluation of DLp formulas at a ground world; modalities run the
// interpreter, Unknown signals a budget exhaustion inside a box/diamond.
tri eval_dlp_formula(const pack_context& ctx, const world& w, const formula& f, int64_t budget);

// Counts minimum execution paths (no repeated (world, program) firing within
// a path); nullopt = budget exceeded.
std::optional<int64_t> validate_termination_finiteness(const pack_context& ctx,
                                                       const program& alpha, const world& w,
                                                       int64_t budget);

// ---------------------------------------------------------------------------
// Termination certificates: program terminations have no operational rules of
// their own, so progressive steps carry replayable evidence instead.
// ---------------------------------------------------------------------------

struct termination_certificate {
    enum class kind { unroll, variant };
    kind k = kind::unroll;
    int64_t bound = 1;  // unroll
    poly variant_expr;  // variant

    static termination_certificate unroll(int64_t k);
    static termination_certificate variant(poly v);
    std::string to_string() const;
};

struct termination_proof {
    termination_certificate cert;
    std::vector<std::pair<sequent, std::string>> obligations; // sequent, verdict text
    std::vector<std::string> path; // unroll witness: rule tags
};

// Unroll: bounded symbolic search for a Gamma-discharged path to ter.
// Variant: guard implies v > 0, every body unrolling decreases v by >= 1
// (loop-free bodies). Unknown = neither mechanism succeeds.
std::optional<termination_proof> terminates(const pack_context& ctx,
                                            const std::vector<labeled_formula>& gamma,
                                            const program& alpha, const label& sigma,
                                            const std::optional<termination_certificate>& cert);

world world_from_label(const pack_context& ctx, const label& l, const ground_world& g);

} // namespace dlp
