#include "test_util.hpp"

#include <doctest.h>

using namespace dlp;
using namespace dlp::testing;

namespace {

sequent parse_s(const std::string& s) { return parser(s).parse_sequent_all(); }

auto_result prove_auto(inst_id inst, const std::string& goal, int64_t budget = 500) {
    search_config cfg;
    cfg.max_nodes = budget;
    return auto_prove(inst, parse_s(goal), cfg);
}

} // namespace

TEST_CASE("the auto prover closes the floor goals and its output replays") {
    auto_result r1 = prove_auto(
        inst_id::wp, "{x -> t} : x > 0 |- {x -> t} : [while x > 0 do x := x - 1 end] (x <= 0)");
    REQUIRE(r1.proved);
    pack_context ctx;
    ctx.inst = inst_id::wp;
    CHECK(check_proof(ctx, r1.graph).accepted);
    REQUIRE(r1.graph.backlinks().size() == 1);
    // the back-link runs through a one-variable template and theta = [u-1/u]
    const backlink_rec& b = r1.graph.backlinks()[0];
    const sequent& companion = r1.graph.node(b.companion).seq;
    REQUIRE(companion.right.size() == 1);
    REQUIRE(companion.left.empty());
    REQUIRE(companion.right[0].lab().is_store());
    std::string u;
    REQUIRE(companion.right[0].lab().as_store().entries().size() == 1);
    REQUIRE(companion.right[0].lab().as_store().entries()[0].second.is_variable(&u));
    REQUIRE(b.theta.mapping().size() == 1);
    CHECK(*b.theta.find(u) == poly::var(u) - poly(rational(1)));

    auto_result r2 = prove_auto(
        inst_id::wp, "|- {x -> t} : [if x > 0 then x := x else x := 0 - x end] (x >= 0)");
    REQUIRE(r2.proved);
    CHECK(check_proof(ctx, r2.graph).accepted);
}

TEST_CASE("proof search is budget-monotone with identical graphs") {
    const char* goal = "{x -> t} : x > 0 |- {x -> t} : [while x > 0 do x := x - 1 end] (x <= 0)";
    auto_result small = prove_auto(inst_id::wp, goal, 60);
    auto_result large = prove_auto(inst_id::wp, goal, 500);
    REQUIRE(small.proved);
    REQUIRE(large.proved);
    CHECK(certificate_to_json(small.graph) == certificate_to_json(large.graph));
}

TEST_CASE("the divergent diamond fails with TerminationUnknown inside the budget") {
    auto_result r = prove_auto(inst_id::wp, "|- {x -> 1} : <while true do x := x + 1 end> (true)",
                               1000);
    CHECK(!r.proved);
    CHECK(r.reason == failure_reason::termination_unknown);
    CHECK(r.graph.size() <= 1000);
}

TEST_CASE("goals with only arithmetic content close without search") {
    auto_result r = prove_auto(inst_id::wp, "{x -> t} : x > 0 |- {x -> t} : x >= 0");
    REQUIRE(r.proved);
    CHECK(r.graph.size() == 1); // the oracle closes the root directly
    CHECK(r.graph.node(0).rule == rule_id::ter_close);
}

TEST_CASE("searches that cannot close report structured failures") {
    // an invalid non-dynamic goal surfaces the oracle verdict
    auto_result bad = prove_auto(inst_id::wp, "|- {x -> t} : x > 0");
    CHECK(!bad.proved);
    CHECK(bad.reason == failure_reason::oracle_unknown);

    // a loop whose postcondition fails on exit cannot close its exit branch
    auto_result wrong = prove_auto(
        inst_id::wp, "{x -> t} : x > 0 |- {x -> t} : [while x > 0 do x := x - 1 end] (x = 1)");
    CHECK(!wrong.proved);
}

TEST_CASE("accepted auto proofs never step through an undecided guard") {
    auto_result r = prove_auto(
        inst_id::wp, "{x -> t} : x > 0 |- {x -> t} : [while x > 0 do x := x - 1 end] (x <= 0)");
    REQUIRE(r.proved);
    pack_context ctx;
    ctx.inst = inst_id::wp;
    for (size_t i = 0; i < r.graph.size(); ++i) {
        const proof_node& n = r.graph.node(static_cast<int>(i));
        if (n.st != proof_node::status::closed || n.rule != rule_id::box_r) continue;
        const labeled_formula& tgt = n.seq.right[n.params.index];
        step_result sr = step(ctx, n.seq.left, tgt.fml().prog(), tgt.lab());
        CHECK(sr.exhaustive);
    }
}

TEST_CASE("loop_generalize proposes reproducing templates") {
    fresh_supply fresh;
    store old_l = parser("{x -> t}").parse_label_all().as_store();
    store new_l = parser("{x -> t - 1}").parse_label_all().as_store();
    generalize_proposal p = loop_generalize(old_l, new_l, fresh);
    CHECK(p.template_store.entries().size() == 1);
    CHECK(p.template_store.entries()[0].second.is_variable());
    CHECK(p.template_store.substitute(p.theta_old.mapping()) == old_l);
    CHECK(p.template_store.substitute(p.theta_new.mapping()) == new_l);

    generalize_proposal same = loop_generalize(old_l, old_l, fresh);
    CHECK(same.template_store == old_l);
    CHECK(same.theta_old.is_identity());
    CHECK(same.theta_new.is_identity());

    store a = parser("{n -> N, s -> 0}").parse_label_all().as_store();
    store b = parser("{n -> N - 1, s -> N}").parse_label_all().as_store();
    generalize_proposal two = loop_generalize(a, b, fresh);
    for (auto& [x, e] : two.template_store.entries()) CHECK(e.is_variable());
}

TEST_CASE("the corpus auto goals prove through the document driver") {
    goal_outcome f1 = prove_corpus_goal("auto_floor.dlp", "floor1", true);
    goal_outcome f2 = prove_corpus_goal("auto_floor.dlp", "floor2", true);
    CHECK(f1.report.v == goal_report::verdict::proved);
    CHECK(f2.report.v == goal_report::verdict::proved);
    goal_outcome d = prove_corpus_goal("diverge_diamond.dlp", "diverge", true, 1000);
    CHECK(d.report.v == goal_report::verdict::unknown);
    CHECK(d.report.detail.find("TerminationUnknown") != std::string::npos);
}
