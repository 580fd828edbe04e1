#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>

using namespace dlp;
using namespace dlp::testing;

namespace {

pack_context ctx_of(inst_id id) {
    pack_context ctx;
    ctx.inst = id;
    return ctx;
}

program parse_p(inst_id, const std::string& s) { return parser(s).parse_program_all(); }
label parse_l(const std::string& s) { return parser(s).parse_label_all(); }
formula parse_f(const std::string& s) { return parser(s).parse_formula_all(); }

const char* WP_TEXT = "while n > 0 do s := s + n ; n := n - 1 end";
const char* WPR_TEXT = "((n > 0) ? ; s := s + n ; n := n - 1) * ; (!(n > 0)) ?";

// successor set of the symbolic step at a ground label, as printable keys
std::set<std::string> step_keys(const pack_context& ctx, const program& p, const label& l) {
    step_result r = step(ctx, {}, p, l);
    REQUIRE(r.exhaustive);
    std::set<std::string> keys;
    for (auto& s : r.successors) {
        ground_world g;
        keys.insert(s.prog.normalized().to_string() + "@" +
                    world_from_label(ctx, s.lab, g).to_string());
    }
    return keys;
}

std::set<std::string> interp_keys(const pack_context& ctx, const program& p, const world& w) {
    std::set<std::string> keys;
    for (auto& [p2, w2] : one_step(ctx, p, w))
        keys.insert(p2.normalized().to_string() + "@" + w2.to_string());
    return keys;
}

} // namespace

TEST_CASE("wp steps follow the while-program rule pack") {
    pack_context ctx = ctx_of(inst_id::wp);
    // assignment under a symbolic store
    step_result r = step(ctx, {}, parse_p(ctx.inst, "x := x + 1"), parse_l("{x -> t}"));
    REQUIRE(r.successors.size() == 1);
    CHECK(r.successors[0].prog.is_ter());
    CHECK(r.successors[0].lab == parse_l("{x -> t + 1}"));

    // refuted ground guard exits through (wh2)
    step_result wh2 = step(ctx, {}, parse_p(ctx.inst, WP_TEXT), parse_l("{n -> 0, s -> 0}"));
    REQUIRE(wh2.successors.size() == 1);
    CHECK(wh2.successors[0].prog.is_ter());
    CHECK(wh2.successors[0].lab == parse_l("{n -> 0, s -> 0}"));
    CHECK(wh2.successors[0].rule_tag == "wh2");

    // true guard unrolls one body step
    step_result wh1 = step(ctx, {}, parse_p(ctx.inst, WP_TEXT), parse_l("{n -> 3, s -> 0}"));
    REQUIRE(wh1.successors.size() == 1);
    CHECK(wh1.successors[0].rule_tag == "wh1");
    CHECK(wh1.successors[0].lab == parse_l("{n -> 3, s -> 3}"));

    // an undecided symbolic guard is a structured outcome
    step_result und = step(ctx, {}, parse_p(ctx.inst, WP_TEXT), parse_l("{n -> t, s -> 0}"));
    CHECK(!und.exhaustive);
    REQUIRE(und.undecided_guard.has_value());
    CHECK(*und.undecided_guard == parse_f("n > 0"));
    CHECK(und.successors.empty());

    CHECK_THROWS_AS(step(ctx, {}, program::ter(), parse_l("{x -> 1}")), std::invalid_argument);
}

TEST_CASE("fodl star unfolds through its single unrolling rule") {
    pack_context ctx = ctx_of(inst_id::fodl);
    program star = parse_p(ctx.inst, "(x := x + 1) *");
    step_result r = step(ctx, {}, star, parse_l("{x -> 0}"));
    REQUIRE(r.successors.size() == 1);
    CHECK(r.successors[0].rule_tag == "*");
    CHECK(r.successors[0].prog ==
          parse_p(ctx.inst, "(x := x + 1 ; (x := x + 1) *) + (true ?)"));
    CHECK(r.successors[0].lab == parse_l("{x -> 0}"));
}

TEST_CASE("pl assignment appends to the sequence tail and tests check the last store") {
    pack_context ctx = ctx_of(inst_id::pl);
    step_result r = step(ctx, {}, parse_p(ctx.inst, "x := x + 1"),
                         parse_l("{x -> -1} . {x -> 0}"));
    REQUIRE(r.successors.size() == 1);
    CHECK(r.successors[0].lab == parse_l("{x -> -1} . {x -> 0} . {x -> 1}"));

    // the test consults the tail store, not the head
    step_result t = step(ctx, {}, parse_p(ctx.inst, "(x > 0) ?"),
                         parse_l("{x -> -5} . {x -> 2}"));
    REQUIRE(t.exhaustive);
    REQUIRE(t.successors.size() == 1);
    CHECK(t.successors[0].lab == parse_l("{x -> -5} . {x -> 2}"));
    REQUIRE(t.successors[0].guards.size() == 1);
    CHECK(t.successors[0].guards[0].lab() == parse_l("{x -> 2}"));
}

TEST_CASE("sl statements run the reference heap trace with allocator base 37") {
    pack_context ctx = ctx_of(inst_id::sl);
    step_result r = step(ctx, {}, parse_p(ctx.inst, "x := cons(1)"),
                         parse_l("({x -> 3, y -> 4}, {})"));
    REQUIRE(r.successors.size() == 1);
    CHECK(r.successors[0].lab == parse_l("({x -> 37, y -> 4}, {37 -> 1})"));

    // loading an unallocated address is a memory fault: no transition
    step_result fault = step(ctx, {}, parse_p(ctx.inst, "y := [5]"),
                             parse_l("({x -> 3, y -> 4}, {})"));
    CHECK(fault.exhaustive);
    CHECK(fault.successors.empty());

    run_result full =
        run_to_completion(ctx, parser("x := cons(1) ; y := cons(1) ; [y] := 37 ; "
                                      "y := [x + 1] ; dispose(x + 1)")
                                   .parse_program_all(),
                          world(store_heap{{{"x", 3}, {"y", 4}}, {}}), 1000);
    REQUIRE(full.finals.size() == 1);
    CHECK(full.finals[0].as_heap() == store_heap{{{"x", 37}, {"y", 37}}, {{37, 1}}});
    REQUIRE(full.trace.size() == 6);
}

TEST_CASE("sl allocation is deterministic across repeated runs") {
    pack_context ctx = ctx_of(inst_id::sl);
    program p = parser("x := cons(5) ; y := cons(x)").parse_program_all();
    world w(store_heap{{{"x", 0}, {"y", 0}}, {{40, 9}}});
    run_result a = run_to_completion(ctx, p, w, 100);
    run_result b = run_to_completion(ctx, p, w, 100);
    REQUIRE(a.finals.size() == 1);
    CHECK(a.finals == b.finals);
    CHECK(a.finals[0].as_heap().heap.count(37)); // min free address >= base
}

TEST_CASE("run_to_completion matches the summation and its regular rendering") {
    pack_context wp = ctx_of(inst_id::wp);
    run_result r = run_to_completion(wp, parse_p(wp.inst, WP_TEXT),
                                     world(ground_world{{"n", 5}, {"s", 0}}), 10000);
    REQUIRE(r.finals.size() == 1);
    CHECK(r.finals[0].as_map() == ground_world{{"n", 0}, {"s", 15}});

    CHECK(run_to_completion(wp, program::ter(), world(ground_world{{"x", 2}}), 10).finals ==
          std::vector<world>{world(ground_world{{"x", 2}})});

    pack_context fodl = ctx_of(inst_id::fodl);
    run_result rr = run_to_completion(fodl, parse_p(fodl.inst, WPR_TEXT),
                                      world(ground_world{{"n", 5}, {"s", 0}}), 10000);
    REQUIRE(rr.finals.size() == 1);
    CHECK(rr.finals[0].as_map() == ground_world{{"n", 0}, {"s", 15}});
}

TEST_CASE("eval_dlp_formula runs modalities against the interpreter") {
    pack_context ctx = ctx_of(inst_id::wp);
    world w(ground_world{{"n", 5}, {"s", 0}});
    CHECK(eval_dlp_formula(ctx, w, parse_f(std::string("[") + WP_TEXT + "] (s = 15)"), 10000) ==
          tri::yes);
    CHECK(eval_dlp_formula(ctx, w, parse_f(std::string("[") + WP_TEXT + "] (s = 14)"), 10000) ==
          tri::no);

    rng_t rng(2);
    for (int i = 0; i < 30; ++i) {
        ground_world g = rand_world(rng, {"x", "y"}, -5, 5);
        formula f = rand_atom(rng, {"x", "y"});
        CHECK(eval_dlp_formula(ctx, world(g), formula::box(program::ter(), f), 100) ==
              eval_dlp_formula(ctx, world(g), f, 100));
    }

    CHECK(eval_dlp_formula(ctx, world(ground_world{{"x", 1}}),
                           parse_f("<while true do x := x + 1 end> (true)"), 500) == tri::unknown);
}

TEST_CASE("eval_temporal follows the process-logic clauses") {
    std::vector<ground_world> path{{{"x", -1}}, {{"x", 0}}, {{"x", 1}}};
    formula ev = formula::eventually(parse_f("x > 0"));
    CHECK(eval_temporal(path, ev));
    CHECK(!eval_temporal({{{"x", -1}}, {{"x", -2}}}, ev));
    rng_t rng(4);
    for (int i = 0; i < 30; ++i) {
        ground_world g = rand_world(rng, {"x"}, -4, 4);
        formula f = rand_atom(rng, {"x"});
        CHECK(eval_temporal({g}, formula::tfirst(f)) == eval_temporal({g}, f));
    }
    CHECK_THROWS_AS(eval_temporal(path, parse_f("[x := 1] (x = 1)")), std::invalid_argument);
    CHECK_THROWS_AS(eval_temporal({}, ev), std::invalid_argument);
}

TEST_CASE("eval_sl_formula distinguishes ** from && on the reference states") {
    store_heap s2h2{{{"x", 37}, {"y", 38}}, {{37, 1}, {38, 1}}};
    store_heap s5h5{{{"x", 37}, {"y", 37}}, {{37, 1}}};
    formula phi = parse_f("(x |-> 1) ** (y |-> 1)");
    formula psi = parse_f("(x |-> 1) && (y |-> 1)");
    CHECK(eval_sl_formula(s2h2, phi));
    CHECK(eval_sl_formula(s2h2, psi));
    CHECK(eval_sl_formula(s5h5, psi));
    CHECK(!eval_sl_formula(s5h5, phi));
    CHECK(!eval_sl_formula(store_heap{{{"x", 1}}, {}}, parse_f("x |-> 0")));
}

TEST_CASE("termination finiteness counts minimum execution paths") {
    pack_context wp = ctx_of(inst_id::wp);
    CHECK(validate_termination_finiteness(wp, parser(WP_TEXT).parse_program_all(),
                                          world(ground_world{{"n", 3}, {"s", 0}}),
                                          10000) == 1);
    CHECK(validate_termination_finiteness(wp, program::ter(), world(ground_world{}), 10) == 1);
    pack_context fodl = ctx_of(inst_id::fodl);
    CHECK(validate_termination_finiteness(fodl, parser("(x := 1) + (x := 2)").parse_program_all(),
                                          world(ground_world{{"x", 0}}), 100) == 2);
    // budget exhaustion is reported, not looped on
    CHECK(!validate_termination_finiteness(wp, parser("while true do x := x + 1 end")
                                                   .parse_program_all(),
                                           world(ground_world{{"x", 0}}), 50)
               .has_value());
}

TEST_CASE("termination certificates: unroll, variant, and the divergent loop") {
    pack_context ctx = ctx_of(inst_id::wp);
    // loop-free program with a two-step unroll
    auto p1 = terminates(ctx, {}, parser("x := x + 1 ; y := 0").parse_program_all(),
                         parse_l("{x -> t, y -> r}"), termination_certificate::unroll(2));
    CHECK(p1.has_value());
    CHECK(!terminates(ctx, {}, parser("x := x + 1 ; y := 0").parse_program_all(),
                      parse_l("{x -> t, y -> r}"), termination_certificate::unroll(1))
               .has_value());

    // while true never terminates under any certificate
    program w = parser("while true do x := x + 1 end").parse_program_all();
    CHECK(!terminates(ctx, {}, w, parse_l("{x -> 1}"), termination_certificate::unroll(5))
               .has_value());
    CHECK(!terminates(ctx, {}, w, parse_l("{x -> 1}"),
                      termination_certificate::variant(poly::var("x")))
               .has_value());
    CHECK(!terminates(ctx, {}, w, parse_l("{x -> 1}"), std::nullopt).has_value());

    // the summation loop terminates under the variant n
    std::vector<labeled_formula> gamma{
        parser("{n -> N, s -> 0} : n >= 0").parse_labeled_formula_all()};
    auto pv = terminates(ctx, gamma, parser(WP_TEXT).parse_program_all(),
                         parse_l("{n -> N, s -> 0}"),
                         termination_certificate::variant(poly::var("n")));
    REQUIRE(pv.has_value());
    CHECK(pv->obligations.size() >= 2);
}

TEST_CASE("a variant termination proof implies halting on consistent ground instances") {
    pack_context ctx = ctx_of(inst_id::wp);
    program wp = parser(WP_TEXT).parse_program_all();
    auto proof = terminates(ctx, {}, wp, parse_l("{n -> N, s -> 0}"),
                            termination_certificate::variant(poly::var("n")));
    REQUIRE(proof.has_value());
    rng_t rng(6);
    for (int i = 0; i < 50; ++i) {
        ground_world g{{"n", rand_between(rng, -10, 15)}, {"s", rand_between(rng, -5, 5)}};
        run_result r = run_to_completion(ctx, wp, world(g), 1000);
        CHECK(!r.budget_exceeded);
        CHECK(r.finals.size() == 1);
    }
}

TEST_CASE("ground step and the concrete interpreter fire the same transitions") {
    rng_t rng(12);
    std::vector<std::string> vars{"x", "y"};
    for (inst_id inst : {inst_id::wp, inst_id::fodl}) {
        pack_context ctx = ctx_of(inst);
        for (int i = 0; i < 200; ++i) {
            program p = rand_program(rng, inst, vars, 3);
            store s = rand_ground_store(rng, vars, -4, 4);
            world w = world_from_label(ctx, label(s), {});
            CHECK(step_keys(ctx, p, label(s)) == interp_keys(ctx, p, w));
        }
    }
    // pl: ground sequences
    pack_context pl = ctx_of(inst_id::pl);
    for (int i = 0; i < 150; ++i) {
        program p = rand_program(rng, inst_id::pl, vars, 3);
        store s = rand_ground_store(rng, vars, -4, 4);
        store_seq seq;
        seq.elems.push_back(rand_ground_store(rng, vars, -4, 4));
        seq.elems.push_back(s);
        label l(seq);
        CHECK(step_keys(pl, p, l) == interp_keys(pl, p, world_from_label(pl, l, {})));
    }
    // sl: ground store-heap states
    pack_context sl = ctx_of(inst_id::sl);
    for (int i = 0; i < 150; ++i) {
        store_heap sh;
        sh.vars = rand_world(rng, vars, 36, 40);
        for (int a = 37; a < 40; ++a)
            if (rand_between(rng, 0, 1)) sh.heap[a] = rand_between(rng, 0, 5);
        static const char* stmts[] = {"x := cons(2)", "y := [x]", "[x] := 9", "dispose(x)",
                                      "x := cons(1) ; dispose(x)"};
        program p = parser(stmts[rand_between(rng, 0, 4)]).parse_program_all();
        CHECK(step_keys(sl, p, label(sh)) == interp_keys(sl, p, world(sh)));
    }
}

TEST_CASE("wp is deterministic on ground labels") {
    rng_t rng(13);
    pack_context ctx = ctx_of(inst_id::wp);
    for (int i = 0; i < 200; ++i) {
        program p = rand_program(rng, inst_id::wp, {"x", "y"}, 3);
        store s = rand_ground_store(rng, {"x", "y"}, -4, 4);
        step_result r = step(ctx, {}, p, label(s));
        REQUIRE(r.exhaustive);
        CHECK(r.successors.size() <= 1);
    }
}

TEST_CASE("pl labels grow only on assignment steps") {
    rng_t rng(14);
    pack_context ctx = ctx_of(inst_id::pl);
    program incr = parser("x := x + 1").parse_program_all();
    label l = parse_l("{x -> 0}");
    for (int n = 1; n <= 6; ++n) {
        step_result r = step(ctx, {}, incr, l);
        REQUIRE(r.successors.size() == 1);
        l = r.successors[0].lab;
        REQUIRE(l.is_seq());
        CHECK(l.as_seq().elems.size() == static_cast<size_t>(n) + 1);
    }
    // non-assignment steps preserve the sequence shape
    for (int i = 0; i < 50; ++i) {
        program p =
            rand_between(rng, 0, 1)
                ? parser("(x >= -9) ?").parse_program_all()
                : parser("(x := 1) + (x := 2)").parse_program_all();
        step_result r = step(ctx, {}, p, l);
        for (auto& s : r.successors) {
            REQUIRE(s.lab.is_seq());
            CHECK(s.lab.as_seq().elems.size() == l.as_seq().elems.size());
        }
    }
}
