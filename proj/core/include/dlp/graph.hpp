#pragma once

#include "dlp/kernel.hpp"

namespace dlp {

struct sequent_mismatch : std::runtime_error {
    explicit sequent_mismatch(const std::string& what) : std::runtime_error(what) {}
};
struct open_goals : std::runtime_error {
    explicit open_goals(const std::string& what) : std::runtime_error(what) {}
};

struct proof_node {
    enum class status { open, closed, bud };
    int id = 0;
    int parent = -1;
    sequent seq;
    status st = status::open;
    rule_id rule = rule_id::ax;
    rule_params params;
    rule_application app;
    std::vector<int> children;
};

struct backlink_rec {
    int bud = -1;
    int companion = -1;
    substitution theta;
};

// Rule-tagged derivation tree with back-links. Tree edges are acyclic by
// construction; only back-links create cycles.
class proof_graph {
public:
    proof_graph() {}
    explicit proof_graph(inst_id inst) : m_inst(inst) {}

    inst_id inst() const { return m_inst; }
    void set_inst(inst_id i) { m_inst = i; }

    int add_root(sequent s);
    size_t size() const { return m_nodes.size(); }
    const proof_node& node(int id) const;
    proof_node& node_mut(int id);
    const std::vector<backlink_rec>& backlinks() const { return m_backlinks; }

    std::vector<int> open_ids() const;
    int first_open() const; // -1 when closed

    // Applies a rule through the kernel, attaching premise nodes; returns the
    // new child ids (empty when the rule closes the goal).
    std::vector<int> apply(const pack_context& ctx, int goal, rule_id rule,
                           const rule_params& params);

    // Closes a bud against an ancestor companion; theta is validated (or
    // found through match_label when omitted).
    void add_backlink(int bud, int companion, std::optional<substitution> theta);

    bool is_ancestor(int anc, int node) const;

    // raw construction for deserialized certificates
    int add_node_raw(proof_node n);
    void add_backlink_raw(backlink_rec b);

    std::string render_table() const;

private:
    inst_id m_inst = inst_id::wp;
    std::vector<proof_node> m_nodes;
    std::vector<backlink_rec> m_backlinks;
};

} // namespace dlp
