#pragma once

#include "dlp/autoprover.hpp"
#include "dlp/certificate.hpp"
#include "dlp/parser.hpp"
#include "dlp/script.hpp"

#include <iosfwd>

namespace dlp {

struct prove_options {
    bool use_auto = false;
    bool render_text = false;
    int64_t budget = 500;
    int64_t depth = 64;
    oracle_config oracle;
    std::string out_dir; // certificates land next to the input when empty
    std::vector<std::string> variants; // "<loop-site>:<expr>"
};

struct goal_report {
    enum class verdict { proved, disproved, unknown };
    std::string name;
    verdict v = verdict::unknown;
    std::string detail;
    std::string cert_path;
    std::string oracle_tag;
    double seconds = 0;
};

struct run_report {
    std::vector<goal_report> goals;
    // exit code from the worst verdict: 0 proved, 1 disproved, 2 unknown
    int exit_code = 0;
};

run_report cmd_prove(const std::string& path, const prove_options& opt, std::ostream& out);
int cmd_check(const std::string& cert_path, const oracle_config& oracle, std::ostream& out);

struct exec_options {
    std::string world_text;
    int64_t budget = 100000;
    std::optional<int64_t> alloc_base;
};
int cmd_exec(const std::string& path, const exec_options& opt, std::ostream& out);

int cmd_oracle(const std::string& sequent_text, const oracle_config& oracle, std::ostream& out);

// Builds the proof graph for one goal of a parsed document (shared by
// cmd_prove and the test suites).
struct goal_outcome {
    goal_report report;
    std::optional<proof_graph> graph;
};
goal_outcome prove_goal(const input_document& doc, const input_goal& goal,
                        const prove_options& opt);

} // namespace dlp
