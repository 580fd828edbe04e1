#include "dlp/certificate.hpp"
#include "dlp/parser.hpp"

#include <fstream>
#include <json.hpp>
#include <set>

namespace dlp {

using nlohmann::json;

namespace {

int linear_index(const sequent& s, occurrence occ) {
    return occ.left ? static_cast<int>(occ.index)
                    : static_cast<int>(s.left.size() + occ.index);
}

std::set<std::pair<int, int>> progressive_of(const proof_node& n) {
    std::set<std::pair<int, int>> out;
    for (size_t slot = 0; slot < n.app.cp_maps.size(); ++slot) {
        for (auto& p : n.app.cp_maps[slot]) {
            bool prog = p.target && (n.rule == rule_id::box_r ||
                                     ((n.rule == rule_id::box_l || n.rule == rule_id::dia_step) &&
                                      n.app.term_proof.has_value()));
            if (prog)
                out.insert({linear_index(n.seq, p.from),
                            linear_index(n.app.premises[slot], p.to)});
        }
    }
    return out;
}

json subst_to_json(const substitution& theta) {
    json j = json::object();
    for (auto& [x, e] : theta.mapping()) j[x] = e.to_string();
    return j;
}

substitution subst_from_json(const json& j) {
    substitution theta;
    for (auto it = j.begin(); it != j.end(); ++it) {
        parser p(it.value().get<std::string>());
        theta.set(it.key(), to_poly(p.parse_expr_all()));
    }
    return theta;
}

json params_to_json(const proof_node& n) {
    json j = json::object();
    const rule_params& p = n.params;
    if (p.index >= 0) j["index"] = p.index;
    if (!p.side.empty()) j["side"] = p.side;
    if (p.via_prog) {
        j["via"] = json::object();
        j["via"]["from"] = json::array({p.via_prog->to_string(), p.via_label->to_string()});
        j["via"]["to"] = json::array({p.via_prog2->to_string(), p.via_label2->to_string()});
    }
    if (p.term_cert) {
        json t = json::object();
        if (p.term_cert->k == termination_certificate::kind::unroll) {
            t["kind"] = "unroll";
            t["k"] = p.term_cert->bound;
        } else {
            t["kind"] = "variant";
            t["expr"] = p.term_cert->variant_expr.to_string();
        }
        j["termination"] = t;
    }
    if (p.cut_formula) j["cut"] = p.cut_formula->to_string();
    if (p.sub_template) j["template"] = p.sub_template->to_string();
    if (p.sub_theta) j["subst"] = subst_to_json(*p.sub_theta);
    if (p.le_formula) j["formula"] = p.le_formula->to_string();
    if (p.lift_label) j["label"] = p.lift_label->to_string();
    if (p.heap_split) {
        json h = json::object();
        for (auto& [a, v] : *p.heap_split) h[std::to_string(a)] = v;
        j["split"] = h;
    }
    return j;
}

rule_params params_from_json(const json& j) {
    static const std::set<std::string> allowed = {"index",  "side",     "via",   "termination",
                                                  "cut",    "template", "subst", "formula",
                                                  "label",  "split"};
    rule_params p;
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw certificate_error("unknown params field: " + it.key());
    if (j.contains("index")) p.index = j["index"].get<int>();
    if (j.contains("side")) p.side = j["side"].get<std::string>();
    if (j.contains("via")) {
        auto from = j["via"]["from"];
        auto to = j["via"]["to"];
        p.via_prog = parser(from[0].get<std::string>()).parse_program_all();
        p.via_label = parser(from[1].get<std::string>()).parse_label_all();
        p.via_prog2 = parser(to[0].get<std::string>()).parse_program_all();
        p.via_label2 = parser(to[1].get<std::string>()).parse_label_all();
    }
    if (j.contains("termination")) {
        auto t = j["termination"];
        std::string kind = t["kind"].get<std::string>();
        if (kind == "unroll")
            p.term_cert = termination_certificate::unroll(t["k"].get<int64_t>());
        else if (kind == "variant")
            p.term_cert = termination_certificate::variant(
                to_poly(parser(t["expr"].get<std::string>()).parse_expr_all()));
        else
            throw certificate_error("unknown termination kind: " + kind);
    }
    if (j.contains("cut"))
        p.cut_formula = parser(j["cut"].get<std::string>()).parse_labeled_formula_all();
    if (j.contains("template"))
        p.sub_template = parser(j["template"].get<std::string>()).parse_sequent_all();
    if (j.contains("subst")) p.sub_theta = subst_from_json(j["subst"]);
    if (j.contains("formula"))
        p.le_formula = parser(j["formula"].get<std::string>()).parse_formula_all();
    if (j.contains("label")) {
        label l = parser(j["label"].get<std::string>()).parse_label_all();
        if (!l.is_store()) throw certificate_error("lift labels are stores");
        p.lift_label = l.as_store();
    }
    if (j.contains("split")) {
        std::map<int64_t, int64_t> h;
        for (auto it = j["split"].begin(); it != j["split"].end(); ++it)
            h[std::stoll(it.key())] = it.value().get<int64_t>();
        p.heap_split = std::move(h);
    }
    return p;
}

} // namespace

std::string certificate_to_json(const proof_graph& g) {
    json doc;
    doc["version"] = 1;
    doc["instantiation"] = inst_name(g.inst());
    doc["nodes"] = json::array();
    for (size_t i = 0; i < g.size(); ++i) {
        const proof_node& n = g.node(static_cast<int>(i));
        json jn;
        jn["id"] = n.id;
        jn["sequent"] = n.seq.to_string();
        if (n.st == proof_node::status::closed) {
            jn["rule"] = rule_name(n.rule);
            json pj = params_to_json(n);
            if (!pj.empty()) jn["params"] = pj;
            jn["children"] = n.children;
            auto prog = progressive_of(n);
            if (!prog.empty()) {
                json pp = json::array();
                for (auto& [a, b] : prog) pp.push_back(json::array({a, b}));
                jn["progressive"] = pp;
            }
        }
        doc["nodes"].push_back(std::move(jn));
    }
    doc["backlinks"] = json::array();
    for (auto& b : g.backlinks()) {
        json jb;
        jb["bud"] = b.bud;
        jb["companion"] = b.companion;
        jb["subst"] = subst_to_json(b.theta);
        doc["backlinks"].push_back(std::move(jb));
    }
    doc["obligations"] = json::array();
    for (size_t i = 0; i < g.size(); ++i) {
        const proof_node& n = g.node(static_cast<int>(i));
        for (auto& ob : n.app.obligations) {
            json jo;
            jo["node"] = n.id;
            jo["sequent"] = ob.seq.to_string();
            jo["verdict"] = ob.verdict.to_string();
            doc["obligations"].push_back(std::move(jo));
        }
    }
    return doc.dump(2);
}

void write_certificate(const proof_graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw certificate_error("cannot write " + path);
    out << certificate_to_json(g) << "\n";
}

loaded_certificate certificate_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (std::exception& e) {
        throw certificate_error(std::string("bad JSON: ") + e.what());
    }
    static const std::set<std::string> top = {"version", "instantiation", "nodes", "backlinks",
                                              "obligations"};
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (!top.count(it.key())) throw certificate_error("unknown field: " + it.key());
    if (!doc.contains("version") || doc["version"].get<int>() != 1)
        throw certificate_error("unsupported certificate version");
    auto inst = inst_from_name(doc.value("instantiation", ""));
    if (!inst) throw certificate_error("unknown instantiation");

    loaded_certificate out;
    out.graph.set_inst(*inst);

    static const std::set<std::string> nodef = {"id", "sequent", "rule", "params", "children",
                                                "progressive"};
    std::map<int, int> remap; // file id -> graph id
    std::vector<std::pair<int, std::vector<int>>> children_of;
    for (auto& jn : doc["nodes"]) {
        for (auto it = jn.begin(); it != jn.end(); ++it)
            if (!nodef.count(it.key())) throw certificate_error("unknown node field: " + it.key());
        if (!jn.contains("id") || !jn.contains("sequent"))
            throw certificate_error("node needs id and sequent");
        int fid = jn["id"].get<int>();
        if (remap.count(fid)) throw certificate_error("duplicate node id");
        proof_node n;
        n.seq = parser(jn["sequent"].get<std::string>()).parse_sequent_all();
        std::vector<int> kids;
        if (jn.contains("rule")) {
            auto r = rule_from_name(jn["rule"].get<std::string>());
            if (!r) throw certificate_error("unknown rule: " + jn["rule"].get<std::string>());
            n.st = proof_node::status::closed;
            n.rule = *r;
            if (jn.contains("params")) n.params = params_from_json(jn["params"]);
            if (jn.contains("children")) kids = jn["children"].get<std::vector<int>>();
        } else {
            n.st = proof_node::status::open; // buds resolved below
        }
        int gid = out.graph.add_node_raw(std::move(n));
        remap[fid] = gid;
        children_of.emplace_back(gid, std::move(kids));
        if (jn.contains("progressive")) {
            std::set<std::pair<int, int>> marks;
            for (auto& pp : jn["progressive"])
                marks.insert({pp[0].get<int>(), pp[1].get<int>()});
            out.progressive_marks[gid] = std::move(marks);
        }
    }
    for (auto& [gid, kids] : children_of) {
        for (int fk : kids) {
            auto it = remap.find(fk);
            if (it == remap.end()) throw certificate_error("child id not present");
            out.graph.node_mut(gid).children.push_back(it->second);
            if (out.graph.node(it->second).parent != -1)
                throw certificate_error("node has two parents");
            out.graph.node_mut(it->second).parent = gid;
        }
    }
    // exactly one root
    int roots = 0;
    for (size_t i = 0; i < out.graph.size(); ++i)
        if (out.graph.node(static_cast<int>(i)).parent == -1) ++roots;
    if (roots != 1) throw certificate_error("certificate must have exactly one root");

    static const std::set<std::string> blf = {"bud", "companion", "subst"};
    for (auto& jb : doc["backlinks"]) {
        for (auto it = jb.begin(); it != jb.end(); ++it)
            if (!blf.count(it.key())) throw certificate_error("unknown backlink field: " + it.key());
        backlink_rec b;
        auto bit = remap.find(jb["bud"].get<int>());
        auto cit = remap.find(jb["companion"].get<int>());
        if (bit == remap.end() || cit == remap.end())
            throw certificate_error("backlink references a missing node");
        b.bud = bit->second;
        b.companion = cit->second;
        if (jb.contains("subst")) b.theta = subst_from_json(jb["subst"]);
        if (out.graph.node(b.bud).st != proof_node::status::open)
            throw certificate_error("bud node also carries a rule");
        out.graph.node_mut(b.bud).st = proof_node::status::bud;
        out.graph.add_backlink_raw(std::move(b));
    }
    static const std::set<std::string> obf = {"node", "sequent", "verdict"};
    if (doc.contains("obligations"))
        for (auto& jo : doc["obligations"])
            for (auto it = jo.begin(); it != jo.end(); ++it)
                if (!obf.count(it.key()))
                    throw certificate_error("unknown obligation field: " + it.key());
    return out;
}

loaded_certificate load_certificate(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw certificate_error("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return certificate_from_json(text);
}

std::string verify_progressive_marks(const loaded_certificate& cert, const proof_graph& validated) {
    for (size_t i = 0; i < validated.size(); ++i) {
        const proof_node& n = validated.node(static_cast<int>(i));
        std::set<std::pair<int, int>> expect;
        if (n.st == proof_node::status::closed) expect = progressive_of(n);
        std::set<std::pair<int, int>> stored;
        auto it = cert.progressive_marks.find(n.id);
        if (it != cert.progressive_marks.end()) stored = it->second;
        if (stored != expect)
            return "progressive marks of node " + std::to_string(n.id) +
                   " disagree with the re-derived rule application";
    }
    return "";
}

} // namespace dlp
