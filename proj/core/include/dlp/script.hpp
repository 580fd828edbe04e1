#pragma once

#include "dlp/cyclic.hpp"
#include "dlp/parser.hpp"

namespace dlp {

struct script_error : std::runtime_error {
    explicit script_error(const std::string& what) : std::runtime_error(what) {}
};

// Executes proof-script commands (one per line) against a proof graph. A
// command applies to the lowest-id open goal unless prefixed with
// 'goal <id>'.
class script_engine {
public:
    script_engine(pack_context ctx, const definitions& defs, sequent root);

    void run_line(const std::string& line);
    void run(const std::vector<std::string>& lines);

    const proof_graph& graph() const { return m_graph; }
    proof_graph& graph_mut() { return m_graph; }
    int current_goal() const { return m_graph.first_open(); }

private:
    pack_context m_ctx;
    const definitions& m_defs;
    proof_graph m_graph;
};

} // namespace dlp
