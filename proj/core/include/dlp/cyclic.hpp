#pragma once

#include "dlp/graph.hpp"

namespace dlp {

// one step of a derivation trace: node and formula occurrence
struct trace_point {
    int node = -1;
    occurrence occ;
};

struct cyclic_verdict {
    bool accepted = false;
    std::string reason;
    std::vector<int> witness_cycle; // offending cycle on reject
    std::string caveat;             // conservativeness note
};

struct proof_verdict {
    bool accepted = false;
    int node = -1; // offending node on reject
    std::string reason;
    std::string caveat;
    std::string render;
};

// Recomputed progress mark for a CP pair of a rule application: a BoxR target
// pair, or a BoxL/DiaStep target pair whose termination proof is present.
bool is_progressive(const proof_graph& g, int parent, const cp_pair& p);

// Per-cycle soundness condition: every back-link cycle must carry a trace
// that returns to its starting occurrence at the companion and passes at
// least one progressive step. Sufficient for graphs where a
// back-link's trace follows a single target formula; the caveat records the
// restriction. Throws open_goals on unfinished graphs.
cyclic_verdict check_cyclic(const proof_graph& g);

// Full certificate replay: re-applies every rule (re-discharging oracle
// obligations and termination proofs), re-checks every back-link
// substitution, then runs check_cyclic. `validated`, when given, receives the
// graph with the re-derived rule applications.
proof_verdict check_proof(const pack_context& ctx, const proof_graph& g,
                          proof_graph* validated = nullptr);

} // namespace dlp
