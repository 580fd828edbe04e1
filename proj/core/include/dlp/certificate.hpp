#pragma once

#include "dlp/cyclic.hpp"

#include <string>

namespace dlp {

struct certificate_error : std::runtime_error {
    explicit certificate_error(const std::string& what) : std::runtime_error(what) {}
};

// One JSON document per proof. Field order is free; unknown fields are
// rejected. Serialized verdicts are informational only: checking re-derives
// every obligation.
std::string certificate_to_json(const proof_graph& g);
void write_certificate(const proof_graph& g, const std::string& path);

struct loaded_certificate {
    proof_graph graph;
    // per node: serialized progressive CP pairs as linear indices
    std::map<int, std::set<std::pair<int, int>>> progressive_marks;
};

loaded_certificate certificate_from_json(const std::string& json_text);
loaded_certificate load_certificate(const std::string& path);

// Compares stored progressive marks against the re-derived applications of a
// validated graph; returns an error message, or empty on agreement.
std::string verify_progressive_marks(const loaded_certificate& cert, const proof_graph& validated);

} // namespace dlp
