#pragma once

#include "dlp/label.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace dlp {

using ground_world = std::map<std::string, int64_t>;

// Arithmetic truth at a ground world; atoms compare exact rationals, missing
// variables default to 0. Rejects dynamic/temporal/spatial connectives.
bool eval_arith_formula(const ground_world& w, const formula& f);

// Separation-logic truth at a ground store-heap state; ** enumerates disjoint
// heap splits exhaustively.
bool eval_sl_formula(const store_heap& state, const formula& f);

// Process-logic truth of a temporal/non-dynamic formula over a nonempty path:
// atoms at the head world, `first` at the head, `Suf` through proper
// suffixes. Dynamic formulas are rejected.
bool eval_temporal(const std::vector<ground_world>& path, const formula& f);

// Ground instance of a store-sequence label.
std::vector<ground_world> ground_path(const store_seq& seq, const ground_world& g);

} // namespace dlp
