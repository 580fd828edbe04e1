#include "test_util.hpp"

#include <doctest.h>

#include <fstream>
#include <future>

using namespace dlp;
using namespace dlp::testing;

namespace {

pack_context ctx_of(inst_id id) {
    pack_context ctx;
    ctx.inst = id;
    return ctx;
}

proof_graph proved_graph(const std::string& file, const std::string& goal, bool use_auto = false) {
    goal_outcome o = prove_corpus_goal(file, goal, use_auto);
    REQUIRE(o.report.v == goal_report::verdict::proved);
    REQUIRE(o.graph.has_value());
    return *o.graph;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// replaces every occurrence of `from` with `to`
std::string edited(std::string text, const std::string& from, const std::string& to) {
    size_t at = 0;
    while ((at = text.find(from, at)) != std::string::npos) {
        text.replace(at, from.size(), to);
        at += to.size();
    }
    return text;
}

} // namespace

TEST_CASE("the summation-loop proof graph is a cyclic proof") {
    proof_graph g = proved_graph("wp_sum.dlp", "sum");
    REQUIRE(g.backlinks().size() == 1);
    CHECK(g.backlinks()[0].theta.is_identity());
    CHECK(g.is_ancestor(g.backlinks()[0].companion, g.backlinks()[0].bud));
    cyclic_verdict cv = check_cyclic(g);
    CHECK(cv.accepted);
    CHECK(!cv.caveat.empty());
    proof_verdict pv = check_proof(ctx_of(inst_id::wp), g);
    CHECK(pv.accepted);
}

TEST_CASE("backlinks demand substitution instances of an ancestor") {
    pack_context ctx = ctx_of(inst_id::wp);
    proof_graph g(inst_id::wp);
    sequent s = parser("{x -> u} : x > 0 |- {x -> u} : [x := x] (x > 0)").parse_sequent_all();
    int root = g.add_root(s);
    rule_params p;
    p.sub_template = s;
    p.sub_theta = substitution{};
    int child = g.apply(ctx, root, rule_id::sub, p)[0];
    CHECK_NOTHROW(g.add_backlink(child, root, std::nullopt)); // verbatim bud, identity theta
    CHECK(g.backlinks().size() == 1);

    proof_graph g2(inst_id::wp);
    int r2 = g2.add_root(s);
    rule_params cut;
    cut.cut_formula = parser("{x -> u} : x = 7").parse_labeled_formula_all();
    auto kids = g2.apply(ctx, r2, rule_id::cut, cut);
    CHECK_THROWS_AS(g2.add_backlink(kids[1], r2, std::nullopt), sequent_mismatch);
    // a companion that is not an ancestor is refused outright
    CHECK_THROWS_AS(g2.add_backlink(kids[0], kids[1], substitution{}), not_applicable);
}

TEST_CASE("progress marks sit on boxR targets and on dia steps with termination proofs") {
    proof_graph sum_proof = proved_graph("wp_sum.dlp", "sum");
    int boxr_nodes = 0;
    for (size_t i = 0; i < sum_proof.size(); ++i) {
        const proof_node& n = sum_proof.node(static_cast<int>(i));
        if (n.st != proof_node::status::closed || n.rule != rule_id::box_r) continue;
        ++boxr_nodes;
        for (auto& cp : n.app.cp_maps[0])
            CHECK(is_progressive(sum_proof, n.id, cp) == cp.target);
    }
    CHECK(boxr_nodes == 3);

    proof_graph dia = proved_graph("dia_variant.dlp", "reach");
    int with_proof = 0, without_proof = 0;
    for (size_t i = 0; i < dia.size(); ++i) {
        const proof_node& n = dia.node(static_cast<int>(i));
        if (n.st != proof_node::status::closed || n.rule != rule_id::dia_step) continue;
        for (auto& cp : n.app.cp_maps[0]) {
            if (!cp.target) continue;
            if (n.app.term_proof.has_value()) {
                CHECK(is_progressive(dia, n.id, cp));
                ++with_proof;
            } else {
                CHECK(!is_progressive(dia, n.id, cp));
                ++without_proof;
            }
        }
    }
    CHECK(with_proof == 1);    // the looping branch carries the variant
    CHECK(without_proof == 1); // the exit branch needs no progress
}

TEST_CASE("the diverging diamond certificate is rejected with its witness cycle") {
    loaded_certificate cert =
        load_certificate(corpus_path("certs/diverge_diamond.cert.json"));
    pack_context ctx = ctx_of(inst_id::wp);
    proof_verdict pv = check_proof(ctx, cert.graph);
    CHECK(!pv.accepted);
    CHECK(pv.reason.find("no progressive step") != std::string::npos);
    CHECK(pv.reason.find("cycle") != std::string::npos);
}

TEST_CASE("acyclic finished proofs are vacuously cyclic") {
    proof_graph g = proved_graph("lift_seq.dlp", "seqlift");
    CHECK(g.backlinks().empty());
    CHECK(check_cyclic(g).accepted);
}

TEST_CASE("check_cyclic refuses graphs with open goals") {
    proof_graph g(inst_id::wp);
    g.add_root(parser("|- {x -> 1} : x > 0").parse_sequent_all());
    CHECK_THROWS_AS(check_cyclic(g), open_goals);
    proof_verdict pv = check_proof(ctx_of(inst_id::wp), g);
    CHECK(!pv.accepted);
    CHECK(pv.reason.find("open") != std::string::npos);
}

TEST_CASE("certificates round-trip through JSON and replay deterministically") {
    proof_graph g = proved_graph("wp_sum.dlp", "sum");
    std::string json = certificate_to_json(g);
    loaded_certificate back = certificate_from_json(json);
    pack_context ctx = ctx_of(inst_id::wp);
    proof_graph validated;
    proof_verdict first = check_proof(ctx, back.graph, &validated);
    CHECK(first.accepted);
    CHECK(verify_progressive_marks(back, validated).empty());
    // identical verdicts across runs and across threads
    proof_verdict again = check_proof(ctx, back.graph);
    CHECK(again.accepted == first.accepted);
    CHECK(again.reason == first.reason);
    std::vector<std::future<bool>> futs;
    for (int i = 0; i < 4; ++i)
        futs.push_back(std::async(std::launch::async,
                                  [&back, &ctx] { return check_proof(ctx, back.graph).accepted; }));
    for (auto& f : futs) CHECK(f.get());
}

TEST_CASE("unknown certificate fields and malformed structure are rejected") {
    proof_graph g = proved_graph("lift_gen.dlp", "genlift");
    std::string json = certificate_to_json(g);
    CHECK_THROWS_AS(certificate_from_json(edited(json, "\"version\": 1", "\"version\": 1, \"extra\": 0")),
                    certificate_error);
    CHECK_THROWS_AS(certificate_from_json("{"), certificate_error);
    CHECK_THROWS_AS(certificate_from_json("{\"version\": 2}"), certificate_error);
}

TEST_CASE("a forged obligation in a certificate is caught on replay") {
    proof_graph g = proved_graph("wp_sum.dlp", "sum");
    std::string json = certificate_to_json(g);
    // flip the invariant everywhere: the final (Ter) obligation then fails
    std::string forged = edited(json, "s = N/2 + N*N/2", "s = N/2 + N*N/2 + 1");
    REQUIRE(forged != json);
    loaded_certificate cert = certificate_from_json(forged);
    proof_verdict pv = check_proof(ctx_of(inst_id::wp), cert.graph);
    CHECK(!pv.accepted);
    CHECK(pv.reason.find("close") != std::string::npos);
}

TEST_CASE("a corrupted back-link substitution is caught on replay") {
    proof_graph g = proved_graph("wp_sum.dlp", "sum");
    std::string json = certificate_to_json(g);
    std::string forged = edited(json, "\"subst\": {}", "\"subst\": {\"m\": \"m + 1\"}");
    REQUIRE(forged != json);
    loaded_certificate cert = certificate_from_json(forged);
    proof_verdict pv = check_proof(ctx_of(inst_id::wp), cert.graph);
    CHECK(!pv.accepted);
    CHECK(pv.reason.find("substitution instance") != std::string::npos);
}

TEST_CASE("forged progressive marks are caught against the re-derived applications") {
    proof_graph g = proved_graph("dia_variant.dlp", "reach");
    std::string json = certificate_to_json(g);
    // claim progress on the non-progressive exit dia step
    loaded_certificate cert = certificate_from_json(json);
    bool added = false;
    for (size_t i = 0; i < cert.graph.size() && !added; ++i) {
        const proof_node& n = cert.graph.node(static_cast<int>(i));
        if (n.st == proof_node::status::closed && n.rule == rule_id::dia_step &&
            !n.params.term_cert.has_value()) {
            cert.progressive_marks[n.id].insert({0, 0});
            added = true;
        }
    }
    REQUIRE(added);
    pack_context ctx = ctx_of(inst_id::wp);
    proof_graph validated;
    REQUIRE(check_proof(ctx, cert.graph, &validated).accepted);
    CHECK(!verify_progressive_marks(cert, validated).empty());
}

TEST_CASE("removing the termination proofs flips a diamond cycle to reject") {
    proof_graph g = proved_graph("dia_variant.dlp", "reach");
    REQUIRE(check_proof(ctx_of(inst_id::wp), g).accepted);
    proof_graph stripped = g;
    int removed = 0;
    for (size_t i = 0; i < stripped.size(); ++i) {
        proof_node& n = stripped.node_mut(static_cast<int>(i));
        if (n.st == proof_node::status::closed && n.params.term_cert.has_value()) {
            n.params.term_cert.reset();
            ++removed;
        }
    }
    REQUIRE(removed >= 1);
    proof_verdict pv = check_proof(ctx_of(inst_id::wp), stripped);
    CHECK(!pv.accepted);
    CHECK(pv.reason.find("no progressive step") != std::string::npos);
}

TEST_CASE("every accepted corpus proof has well-formed derivation traces") {
    struct entry {
        const char* file;
        const char* goal;
        inst_id inst;
    };
    const entry entries[] = {{"wp_sum.dlp", "sum", inst_id::wp},
                             {"pl_suffix.dlp", "diamondx", inst_id::pl},
                             {"sl_heap.dlp", "star2", inst_id::sl},
                             {"lift_seq.dlp", "seqlift", inst_id::fodl},
                             {"lift_gen.dlp", "genlift", inst_id::fodl},
                             {"dia_variant.dlp", "reach", inst_id::wp}};
    for (auto& e : entries) {
        proof_graph g = proved_graph(e.file, e.goal);
        for (size_t i = 0; i < g.size(); ++i) {
            const proof_node& n = g.node(static_cast<int>(i));
            if (n.st != proof_node::status::closed) continue;
            REQUIRE(n.app.cp_maps.size() == n.children.size());
            for (size_t slot = 0; slot < n.app.cp_maps.size(); ++slot) {
                const sequent& prem = g.node(n.children[slot]).seq;
                for (auto& cp : n.app.cp_maps[slot]) {
                    // each CP pair is one of the three derivation-trace cases
                    const labeled_formula& from =
                        cp.from.left ? n.seq.left[cp.from.index] : n.seq.right[cp.from.index];
                    const labeled_formula& to =
                        cp.to.left ? prem.left[cp.to.index] : prem.right[cp.to.index];
                    if (cp.sub_peel) {
                        REQUIRE(n.params.sub_theta.has_value());
                        CHECK(to.substitute(*n.params.sub_theta).normalized() ==
                              from.normalized());
                    } else if (!cp.target) {
                        CHECK(from.normalized() == to.normalized());
                    }
                    if (cp.progressive) CHECK(cp.target);
                }
            }
        }
    }
}
