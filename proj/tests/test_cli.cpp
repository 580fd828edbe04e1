#include "test_util.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace dlp;
using namespace dlp::testing;

namespace {

struct cli_result {
    int exit_code;
    std::string output;
};

cli_result run_cli(const std::string& args) {
    std::string out_path = "/tmp/dlp_cli_out." + std::to_string(::getpid());
    std::string cmd = std::string(DLP_BIN) + " " + args + " > " + out_path + " 2>&1";
    int rc = std::system(cmd.c_str());
    cli_result r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream in(out_path);
    r.output.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    std::remove(out_path.c_str());
    return r;
}

std::string q(const std::string& s) { return "\"" + s + "\""; }

} // namespace

TEST_CASE("exit code 0: proofs, valid oracles, accepted certificates") {
    cli_result prove = run_cli("prove " + corpus_path("wp_sum.dlp") + " --out /tmp");
    CHECK(prove.exit_code == 0);
    CHECK(prove.output.find("sum: Proved") != std::string::npos);

    CHECK(run_cli("oracle " + q("{x -> t} : t >= 0 |- {x -> t} : x + 1 > 0")).exit_code == 0);
    CHECK(run_cli("check /tmp/wp_sum.sum.cert.json").exit_code == 0);
    // the shipped reference certificate replays too
    CHECK(run_cli("check " + corpus_path("certs/wp_sum.cert.json")).exit_code == 0);
    CHECK(run_cli("exec " + corpus_path("wp_sum_exec.dlp") + " --world " + q("n=5,s=0"))
              .exit_code == 0);
}

TEST_CASE("plain arithmetic goals close through the oracle without a script") {
    std::string doc = "/tmp/dlp_cli_trivial.dlp";
    {
        std::ofstream f(doc);
        f << "instantiation: wp\ngoal g := true |- true\n";
    }
    cli_result r = run_cli("prove " + doc + " --out /tmp");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("g: Proved") != std::string::npos);
    CHECK(run_cli("check /tmp/dlp_cli_trivial.g.cert.json").exit_code == 0);
    std::remove(doc.c_str());
}

TEST_CASE("exit code 1: disproved goals, counterexamples, rejected certificates") {
    std::string bad_doc = "/tmp/dlp_cli_bad.dlp";
    {
        std::ofstream f(bad_doc);
        f << "instantiation: wp\ngoal g := |- {} : x > 0\n";
    }
    cli_result prove = run_cli("prove " + std::string(bad_doc));
    CHECK(prove.exit_code == 1);
    CHECK(prove.output.find("Disproved") != std::string::npos);
    std::remove(bad_doc.c_str());

    CHECK(run_cli("oracle " + q("|- {} : x > 0")).exit_code == 1);
    CHECK(run_cli("check " + corpus_path("certs/diverge_diamond.cert.json")).exit_code == 1);
}

TEST_CASE("exit code 2: unknown verdicts and exhausted budgets") {
    cli_result diverge =
        run_cli("prove " + corpus_path("diverge_diamond.dlp") + " --auto --budget 1000");
    CHECK(diverge.exit_code == 2);
    CHECK(diverge.output.find("TerminationUnknown") != std::string::npos);

    std::string spin = "/tmp/dlp_cli_spin.dlp";
    {
        std::ofstream f(spin);
        f << "instantiation: wp\ndef prog W := while true do x := x + 1 end\n";
    }
    CHECK(run_cli("exec " + spin + " --world " + q("x=0") + " --budget 50").exit_code == 2);
    std::remove(spin.c_str());
}

TEST_CASE("exit code 3: parse and validation errors") {
    CHECK(run_cli("prove /tmp/does_not_exist.dlp").exit_code == 3);
    CHECK(run_cli("oracle " + q("this is not a sequent")).exit_code == 3);
    std::string garbage = "/tmp/dlp_cli_garbage.json";
    {
        std::ofstream f(garbage);
        f << "{\"version\": 1, \"surprise\": true}";
    }
    CHECK(run_cli("check " + std::string(garbage)).exit_code == 3);
    std::remove(garbage.c_str());

    std::string foreign = "/tmp/dlp_cli_foreign.dlp";
    {
        std::ofstream f(foreign);
        f << "instantiation: wp\ndef formula bad := (x |-> 1) ** (y |-> 1)\n";
    }
    CHECK(run_cli("prove " + foreign).exit_code == 3);
    std::remove(foreign.c_str());
}

TEST_CASE("certificates written by prove always pass check") {
    const char* files[] = {"wp_sum.dlp", "pl_suffix.dlp", "sl_heap.dlp",
                           "lift_seq.dlp",      "lift_gen.dlp",  "dia_variant.dlp"};
    for (auto* f : files) {
        cli_result prove = run_cli("prove " + corpus_path(f) + " --out /tmp");
        REQUIRE(prove.exit_code == 0);
        // every written certificate replays
        std::istringstream lines(prove.output);
        std::string line;
        int checked = 0;
        while (std::getline(lines, line)) {
            size_t arrow = line.find("-> ");
            if (arrow == std::string::npos) continue;
            std::string path = line.substr(arrow + 3);
            path = path.substr(0, path.find(' '));
            cli_result check = run_cli("check " + path);
            CHECK(check.exit_code == 0);
            ++checked;
        }
        CHECK(checked >= 1);
    }
    cli_result autos = run_cli("prove " + corpus_path("auto_floor.dlp") + " --auto --out /tmp");
    REQUIRE(autos.exit_code == 0);
    CHECK(run_cli("check /tmp/auto_floor.floor1.cert.json").exit_code == 0);
    CHECK(run_cli("check /tmp/auto_floor.floor2.cert.json").exit_code == 0);
}

TEST_CASE("the render flag prints the sideways node table") {
    cli_result r = run_cli("prove " + corpus_path("dia_variant.dlp") + " --render-text --out /tmp");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("0: |- {x -> 1}") != std::string::npos);
    CHECK(r.output.find("[bud -> 1") != std::string::npos);
}

TEST_CASE("exec prints process-logic paths with temporal verdicts") {
    cli_result r = run_cli("exec " + corpus_path("pl_suffix.dlp") + " --world " + q("x=-1"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("{x -> -1} . {x -> 0} . {x -> 1}") != std::string::npos);
    CHECK(r.output.find(": true") != std::string::npos);
}

TEST_CASE("variant flags feed loop-site termination certificates to the search") {
    std::string doc = "/tmp/dlp_cli_variant.dlp";
    {
        std::ofstream f(doc);
        f << "instantiation: wp\n"
             "def prog WD := while x > 0 do x := x - 1 end\n"
             "goal down := {x -> t} : x > 0 |- {x -> t} : <WD> (x <= 0)\n";
    }
    cli_result with = run_cli("prove " + doc + " --auto --variant " +
                              q("while x > 0 do x := x - 1 end:x"));
    CHECK(with.exit_code == 0);
    CHECK(with.output.find("down: Proved") != std::string::npos);
    cli_result without = run_cli("prove " + doc + " --auto");
    CHECK(without.exit_code == 2);
    std::remove(doc.c_str());
}
