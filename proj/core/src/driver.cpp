#include "dlp/driver.hpp"

#include <chrono>
#include <future>
#include <ostream>
#include <sstream>

namespace dlp {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string stem_of(const std::string& path) {
    size_t slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    size_t dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

std::string dir_of(const std::string& path) {
    size_t slash = path.find_last_of('/');
    return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

search_config config_for(const input_document& doc, const prove_options& opt) {
    search_config cfg;
    cfg.max_nodes = opt.budget;
    cfg.max_depth = opt.depth;
    cfg.oracle = opt.oracle;
    auto it = doc.options.find("alloc_base");
    if (it != doc.options.end()) cfg.alloc_base = std::stoll(it->second);
    for (auto& v : opt.variants) {
        size_t colon = v.find_last_of(':');
        if (colon == std::string::npos)
            throw parse_error("--variant takes <loop-site>:<expr>");
        program site = parser(v.substr(0, colon), &doc.defs).parse_program_all();
        poly expr_v = to_poly(parser(v.substr(colon + 1), &doc.defs).parse_expr_all());
        cfg.loop_certs[site.normalized().to_string()] =
            termination_certificate::variant(std::move(expr_v));
    }
    return cfg;
}

} // namespace

goal_outcome prove_goal(const input_document& doc, const input_goal& goal,
                        const prove_options& opt) {
    goal_outcome out;
    out.report.name = goal.name;
    auto t0 = std::chrono::steady_clock::now();
    search_config cfg = config_for(doc, opt);

    pack_context ctx;
    ctx.inst = doc.inst;
    ctx.oracle = opt.oracle;
    ctx.alloc_base = cfg.alloc_base;

    auto script_it = doc.scripts.find(goal.name);
    try {
        if (script_it != doc.scripts.end()) {
            script_engine eng(ctx, doc.defs, goal.seq);
            eng.run(script_it->second);
            if (eng.graph().first_open() >= 0) {
                out.report.v = goal_report::verdict::unknown;
                out.report.detail = "script left goal " +
                                    std::to_string(eng.graph().first_open()) + " open";
                out.graph = eng.graph();
            } else {
                proof_verdict pv = check_proof(ctx, eng.graph());
                if (pv.accepted) {
                    out.report.v = goal_report::verdict::proved;
                    out.graph = eng.graph();
                } else {
                    out.report.v = goal_report::verdict::unknown;
                    out.report.detail = "scripted proof rejected: " + pv.reason;
                    out.graph = eng.graph();
                }
            }
        } else if (opt.use_auto) {
            auto_result r = auto_prove(doc.inst, goal.seq, cfg);
            out.graph = r.graph;
            if (r.proved) {
                out.report.v = goal_report::verdict::proved;
            } else {
                out.report.v = goal_report::verdict::unknown;
                out.report.detail =
                    std::string(failure_text(r.reason)) + (r.detail.empty() ? "" : ": " + r.detail);
            }
        } else {
            // no script, no auto: non-dynamic goals go straight to the oracle
            bool dynamic = false;
            for (auto& fs : {goal.seq.left, goal.seq.right})
                for (auto& lf : fs) dynamic |= lf.is_dynamic();
            if (dynamic) {
                out.report.v = goal_report::verdict::unknown;
                out.report.detail = "dynamic goal without a script (use --auto or a script block)";
            } else {
                oracle_verdict v = check_sequent_validity(goal.seq, opt.oracle);
                out.report.oracle_tag = v.to_string();
                switch (v.kind) {
                case verdict_kind::valid: {
                    proof_graph g(doc.inst);
                    int root = g.add_root(goal.seq);
                    g.apply(ctx, root, rule_id::ter_close, {});
                    out.graph = std::move(g);
                    out.report.v = goal_report::verdict::proved;
                    break;
                }
                case verdict_kind::counterexample:
                    out.report.v = goal_report::verdict::disproved;
                    out.report.detail = v.to_string();
                    break;
                case verdict_kind::unknown:
                    out.report.v = goal_report::verdict::unknown;
                    out.report.detail = v.to_string();
                    break;
                }
            }
        }
    } catch (std::exception& e) {
        out.report.v = goal_report::verdict::unknown;
        out.report.detail = e.what();
    }
    out.report.seconds = seconds_since(t0);
    return out;
}

run_report cmd_prove(const std::string& path, const prove_options& opt, std::ostream& out) {
    input_document doc = load_document(path);
    run_report rep;

    // independent goals proceed in parallel worker threads
    std::vector<std::future<goal_outcome>> futs;
    for (auto& goal : doc.goals)
        futs.push_back(std::async(std::launch::async,
                                  [&doc, &goal, &opt] { return prove_goal(doc, goal, opt); }));

    for (size_t i = 0; i < futs.size(); ++i) {
        goal_outcome o = futs[i].get();
        if (o.report.v == goal_report::verdict::proved && o.graph) {
            std::string dir = opt.out_dir.empty() ? dir_of(path) : opt.out_dir;
            o.report.cert_path = dir + "/" + stem_of(path) + "." + o.report.name + ".cert.json";
            write_certificate(*o.graph, o.report.cert_path);
        }
        if (opt.render_text && o.graph) out << o.graph->render_table();
        rep.goals.push_back(o.report);
    }

    for (auto& gr : rep.goals) {
        const char* verdict = gr.v == goal_report::verdict::proved     ? "Proved"
                              : gr.v == goal_report::verdict::disproved ? "Disproved"
                                                                        : "Unknown";
        out << gr.name << ": " << verdict;
        if (!gr.detail.empty()) out << " (" << gr.detail << ")";
        if (!gr.oracle_tag.empty()) out << " [" << gr.oracle_tag << "]";
        if (!gr.cert_path.empty()) out << " -> " << gr.cert_path;
        char buf[32];
        snprintf(buf, sizeof buf, " %.3fs", gr.seconds);
        out << buf << "\n";
        if (gr.v == goal_report::verdict::disproved)
            rep.exit_code = std::max(rep.exit_code, 1);
        else if (gr.v == goal_report::verdict::unknown)
            rep.exit_code = std::max(rep.exit_code, 2);
    }
    return rep;
}

int cmd_check(const std::string& cert_path, const oracle_config& oracle, std::ostream& out) {
    loaded_certificate cert = load_certificate(cert_path);
    pack_context ctx;
    ctx.inst = cert.graph.inst();
    ctx.oracle = oracle;
    proof_graph validated;
    proof_verdict pv = check_proof(ctx, cert.graph, &validated);
    if (pv.accepted) {
        std::string marks = verify_progressive_marks(cert, validated);
        if (!marks.empty()) {
            out << "Reject: " << marks << "\n";
            return 1;
        }
        out << "Accept";
        if (!pv.caveat.empty()) out << " (" << pv.caveat << ")";
        out << "\n";
        return 0;
    }
    out << "Reject";
    if (pv.node >= 0) out << " at node " << pv.node;
    out << ": " << pv.reason << "\n";
    return 1;
}

int cmd_exec(const std::string& path, const exec_options& opt, std::ostream& out) {
    input_document doc = load_document(path);
    if (doc.defs.programs.empty()) throw parse_error("no program definition to execute");
    const program& prog = doc.defs.programs.begin()->second;

    pack_context ctx;
    ctx.inst = doc.inst;
    if (opt.alloc_base) ctx.alloc_base = *opt.alloc_base;
    else {
        auto it = doc.options.find("alloc_base");
        if (it != doc.options.end()) ctx.alloc_base = std::stoll(it->second);
    }

    ground_world g = parse_world_text(opt.world_text);
    world w;
    switch (doc.inst) {
    case inst_id::wp:
    case inst_id::fodl: w = world(g); break;
    case inst_id::pl: w = world(pl_world{{g}}); break;
    case inst_id::sl: {
        store_heap sh;
        sh.vars = g;
        w = world(std::move(sh));
        break;
    }
    }

    run_result r = run_to_completion(ctx, prog, w, opt.budget);
    if (r.budget_exceeded) {
        out << "BudgetExceeded after " << opt.budget << " steps\n";
        return 2;
    }
    if (doc.inst == inst_id::sl && !r.trace.empty()) {
        int i = 0;
        for (auto& [p, tw] : r.trace) {
            const store_heap& sh = tw.as_heap();
            out << "step " << i++ << ": store {";
            bool first = true;
            for (auto& [x, v] : sh.vars) {
                if (!first) out << ", ";
                out << x << " -> " << v;
                first = false;
            }
            out << "} heap {";
            first = true;
            for (auto& [a, v] : sh.heap) {
                if (!first) out << ", ";
                out << a << " -> " << v;
                first = false;
            }
            out << "}\n";
        }
    }
    out << "finals:\n";
    for (auto& fw : r.finals) out << "  " << fw.to_string() << "\n";
    if (doc.inst == inst_id::pl) {
        for (auto& f : doc.eval_formulas) {
            for (auto& fw : r.finals) {
                bool v = eval_temporal(fw.as_path().path, f);
                out << "eval " << f.to_string() << " on " << fw.to_string() << ": "
                    << (v ? "true" : "false") << "\n";
            }
        }
    }
    if (doc.inst == inst_id::sl) {
        for (auto& f : doc.eval_formulas) {
            for (auto& fw : r.finals) {
                bool v = eval_sl_formula(fw.as_heap(), f);
                out << "eval " << f.to_string() << " on " << fw.to_string() << ": "
                    << (v ? "true" : "false") << "\n";
            }
        }
    }
    return 0;
}

int cmd_oracle(const std::string& sequent_text, const oracle_config& oracle, std::ostream& out) {
    sequent s = parser(sequent_text).parse_sequent_all();
    oracle_verdict v = check_sequent_validity(s, oracle);
    out << v.to_string() << "\n";
    switch (v.kind) {
    case verdict_kind::valid: return 0;
    case verdict_kind::counterexample: return 1;
    case verdict_kind::unknown: return 2;
    }
    return 2;
}

} // namespace dlp
