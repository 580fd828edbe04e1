#include "dlp/graph.hpp"

#include <sstream>

namespace dlp {

int proof_graph::add_root(sequent s) {
    proof_node n;
    n.id = static_cast<int>(m_nodes.size());
    n.seq = std::move(s);
    m_nodes.push_back(std::move(n));
    return m_nodes.back().id;
}

const proof_node& proof_graph::node(int id) const {
    if (id < 0 || id >= static_cast<int>(m_nodes.size()))
        throw std::out_of_range("no node " + std::to_string(id));
    return m_nodes[id];
}

proof_node& proof_graph::node_mut(int id) {
    return const_cast<proof_node&>(node(id));
}

std::vector<int> proof_graph::open_ids() const {
    std::vector<int> out;
    for (auto& n : m_nodes)
        if (n.st == proof_node::status::open) out.push_back(n.id);
    return out;
}

int proof_graph::first_open() const {
    for (auto& n : m_nodes)
        if (n.st == proof_node::status::open) return n.id;
    return -1;
}

std::vector<int> proof_graph::apply(const pack_context& ctx, int goal, rule_id rule,
                                    const rule_params& params) {
    proof_node& n = node_mut(goal);
    if (n.st != proof_node::status::open)
        throw not_applicable("goal " + std::to_string(goal) + " is not open");
    rule_application app = apply_rule(ctx, n.seq, rule, params);
    std::vector<int> kids;
    for (auto& prem : app.premises) {
        proof_node child;
        child.id = static_cast<int>(m_nodes.size());
        child.parent = goal;
        child.seq = prem;
        m_nodes.push_back(std::move(child));
        kids.push_back(m_nodes.back().id);
    }
    proof_node& n2 = node_mut(goal); // m_nodes may have reallocated
    n2.st = proof_node::status::closed;
    n2.rule = rule;
    n2.params = app.params;
    n2.app = std::move(app);
    n2.children = kids;
    return kids;
}

bool proof_graph::is_ancestor(int anc, int id) const {
    for (int cur = node(id).parent; cur >= 0; cur = node(cur).parent)
        if (cur == anc) return true;
    return false;
}

void proof_graph::add_backlink(int bud, int companion, std::optional<substitution> theta) {
    proof_node& b = node_mut(bud);
    if (b.st != proof_node::status::open)
        throw not_applicable("bud " + std::to_string(bud) + " is not open");
    if (!is_ancestor(companion, bud))
        throw not_applicable("companion must be an ancestor of the bud");
    const sequent& comp = node(companion).seq;
    substitution t;
    if (theta) {
        t = *theta;
    } else {
        auto found = match_label(comp, b.seq);
        if (!found) throw sequent_mismatch("no substitution matches bud against companion");
        t = *found;
    }
    if (!comp.substitute(t).same_as(b.seq))
        throw sequent_mismatch("substituted companion does not equal the bud sequent");
    b.st = proof_node::status::bud;
    m_backlinks.push_back({bud, companion, std::move(t)});
}

int proof_graph::add_node_raw(proof_node n) {
    n.id = static_cast<int>(m_nodes.size());
    m_nodes.push_back(std::move(n));
    return m_nodes.back().id;
}

void proof_graph::add_backlink_raw(backlink_rec b) { m_backlinks.push_back(std::move(b)); }

std::string proof_graph::render_table() const {
    // node table in the sideways style: id | left |- right, plus rule and
    // children
    std::ostringstream os;
    for (auto& n : m_nodes) {
        os << n.id << ": " << n.seq.to_string();
        switch (n.st) {
        case proof_node::status::open: os << "   [open]"; break;
        case proof_node::status::bud: {
            for (auto& b : m_backlinks)
                if (b.bud == n.id)
                    os << "   [bud -> " << b.companion << " via " << b.theta.to_string() << "]";
            break;
        }
        case proof_node::status::closed: {
            os << "   (" << rule_name(n.rule);
            if (!n.children.empty()) {
                os << " -> ";
                for (size_t i = 0; i < n.children.size(); ++i)
                    os << (i ? "," : "") << n.children[i];
            }
            os << ")";
            break;
        }
        }
        os << "\n";
    }
    return os.str();
}

} // namespace dlp
