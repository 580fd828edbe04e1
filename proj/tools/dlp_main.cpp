#include "dlp/driver.hpp"

#include <CLI11.hpp>
#include <iostream>

using namespace dlp;

namespace {

oracle_config parse_oracle_flag(const std::string& text) {
    oracle_config cfg = oracle_config::from_env();
    if (text.empty()) return cfg;
    if (text.rfind("bounded", 0) == 0) {
        cfg.smt_path.clear();
        size_t colon = text.find(':');
        if (colon != std::string::npos) cfg.bound = std::stoll(text.substr(colon + 1));
        return cfg;
    }
    if (text == "smt") {
        if (cfg.smt_path.empty())
            throw parse_error("--oracle smt needs the DLP_SMT environment variable");
        return cfg;
    }
    throw parse_error("--oracle takes bounded:B or smt");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dlp: a cyclic dynamic-logic prover over operational rule packs"};
    app.require_subcommand(1);

    std::string file, world_text, oracle_flag, out_dir, cert_path, sequent_text;
    bool use_auto = false, use_script = false, render = false;
    int64_t budget = 500, depth = 64, exec_budget = 100000;
    int64_t alloc_base = -1;
    std::vector<std::string> variants;

    auto* prove = app.add_subcommand("prove", "prove the goals of an input file");
    prove->add_option("file", file)->required();
    prove->add_flag("--auto", use_auto, "heuristic search for goals without scripts");
    prove->add_flag("--script", use_script, "run embedded scripts only (the default)");
    prove->add_option("--budget", budget, "auto-search node budget");
    prove->add_option("--depth", depth, "auto-search depth budget");
    prove->add_option("--oracle", oracle_flag, "bounded:B | smt");
    prove->add_option("--out", out_dir, "certificate output directory");
    prove->add_option("--variant", variants, "<loop-site>:<expr> termination variant")
        ->take_all();
    prove->add_flag("--render-text", render, "print the node table of each proof");

    auto* check = app.add_subcommand("check", "replay a proof certificate");
    check->add_option("cert", cert_path)->required();
    check->add_option("--oracle", oracle_flag, "bounded:B | smt");

    auto* exec = app.add_subcommand("exec", "run a program on the reference interpreter");
    exec->add_option("file", file)->required();
    exec->add_option("--world", world_text, "initial world, e.g. \"n=5,s=0\"")->required();
    exec->add_option("--budget", exec_budget, "exploration budget");
    exec->add_option("--alloc-base", alloc_base, "first allocator address (sl)");

    auto* oracle = app.add_subcommand("oracle", "decide a labeled non-dynamic sequent");
    oracle->add_option("sequent", sequent_text)->required();
    oracle->add_option("--oracle", oracle_flag, "bounded:B | smt");

    CLI11_PARSE(app, argc, argv);

    try {
        if (prove->parsed()) {
            prove_options opt;
            opt.use_auto = use_auto && !use_script;
            opt.render_text = render;
            opt.budget = budget;
            opt.depth = depth;
            opt.oracle = parse_oracle_flag(oracle_flag);
            opt.out_dir = out_dir;
            opt.variants = variants;
            return cmd_prove(file, opt, std::cout).exit_code;
        }
        if (check->parsed()) return cmd_check(cert_path, parse_oracle_flag(oracle_flag), std::cout);
        if (exec->parsed()) {
            exec_options opt;
            opt.world_text = world_text;
            opt.budget = exec_budget;
            if (alloc_base >= 0) opt.alloc_base = alloc_base;
            return cmd_exec(file, opt, std::cout);
        }
        if (oracle->parsed())
            return cmd_oracle(sequent_text, parse_oracle_flag(oracle_flag), std::cout);
    } catch (std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
