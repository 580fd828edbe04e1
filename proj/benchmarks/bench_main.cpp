#include "dlp/autoprover.hpp"
#include "dlp/certificate.hpp"
#include "dlp/driver.hpp"

#include <benchmark/benchmark.h>

using namespace dlp;

namespace {

const char* WP_TEXT = "while n > 0 do s := s + n ; n := n - 1 end";

std::string corpus(const std::string& name) {
    return std::string(DLP_CORPUS_DIR) + "/" + name;
}

void BM_normalize_loop_invariant(benchmark::State& state) {
    expr e = parser("(2*N - m + 1) * m / 2 + (N - m)").parse_expr_all();
    for (auto _ : state) benchmark::DoNotOptimize(normalize_expr(e));
}
BENCHMARK(BM_normalize_loop_invariant);

void BM_match_label_generalization(benchmark::State& state) {
    sequent tmpl = parser("{n -> N - m, s -> (2*N - m + 1) * m / 2} : n >= 0 |- "
                          "{n -> N - m, s -> (2*N - m + 1) * m / 2} : n > 0")
                       .parse_sequent_all();
    sequent target =
        parser("{n -> N, s -> 0} : n >= 0 |- {n -> N, s -> 0} : n > 0").parse_sequent_all();
    for (auto _ : state) benchmark::DoNotOptimize(match_label(tmpl, target));
}
BENCHMARK(BM_match_label_generalization);

void BM_oracle_bounded_node8(benchmark::State& state) {
    sequent s = parser("{n -> N - m, s -> (2*N - m + 1) * m / 2} : n >= 0, "
                       "{n -> N - m, s -> (2*N - m + 1) * m / 2} : n <= 0 |- "
                       "{n -> N - m, s -> (2*N - m + 1) * m / 2} : s = ((N + 1) * N) / 2")
                    .parse_sequent_all();
    entailment_problem p = ground_sequent(s);
    oracle_config cfg;
    for (auto _ : state) benchmark::DoNotOptimize(check_validity(p, cfg));
}
BENCHMARK(BM_oracle_bounded_node8);

void BM_interpreter_sum(benchmark::State& state) {
    pack_context ctx;
    ctx.inst = inst_id::wp;
    program wp = parser(WP_TEXT).parse_program_all();
    world w(ground_world{{"n", state.range(0)}, {"s", 0}});
    for (auto _ : state) benchmark::DoNotOptimize(run_to_completion(ctx, wp, w, 1000000));
}
BENCHMARK(BM_interpreter_sum)->Arg(10)->Arg(100);

void BM_scripted_sum_proof(benchmark::State& state) {
    input_document doc = load_document(corpus("wp_sum.dlp"));
    prove_options opt;
    for (auto _ : state) {
        goal_outcome o = prove_goal(doc, doc.goals[0], opt);
        benchmark::DoNotOptimize(o);
    }
}
BENCHMARK(BM_scripted_sum_proof);

void BM_certificate_replay(benchmark::State& state) {
    input_document doc = load_document(corpus("wp_sum.dlp"));
    prove_options opt;
    goal_outcome o = prove_goal(doc, doc.goals[0], opt);
    std::string json = certificate_to_json(*o.graph);
    pack_context ctx;
    ctx.inst = inst_id::wp;
    for (auto _ : state) {
        loaded_certificate cert = certificate_from_json(json);
        benchmark::DoNotOptimize(check_proof(ctx, cert.graph));
    }
}
BENCHMARK(BM_certificate_replay);

void BM_auto_prove_countdown(benchmark::State& state) {
    sequent goal =
        parser("{x -> t} : x > 0 |- {x -> t} : [while x > 0 do x := x - 1 end] (x <= 0)")
            .parse_sequent_all();
    search_config cfg;
    for (auto _ : state) benchmark::DoNotOptimize(auto_prove(inst_id::wp, goal, cfg));
}
BENCHMARK(BM_auto_prove_countdown);

} // namespace

BENCHMARK_MAIN();
