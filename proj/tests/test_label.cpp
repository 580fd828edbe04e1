#include "test_util.hpp"

#include <doctest.h>

using namespace dlp;
using namespace dlp::testing;

namespace {

store parse_store_text(const std::string& s) {
    label l = parser(s).parse_label_all();
    REQUIRE(l.is_store());
    return l.as_store();
}

formula parse_f(const std::string& s) { return parser(s).parse_formula_all(); }

const char* SIGMA1 = "{n -> N, s -> 0}";
const char* SIGMA2 = "{n -> N - m, s -> (2*N - m + 1) * m / 2}";
const char* SIGMA4 = "{n -> N - (m + 1), s -> (2*N - (m + 1) + 1) * (m + 1) / 2}";

} // namespace

TEST_CASE("store invariants are enforced on construction") {
    CHECK_THROWS_AS(parse_store_text("{x -> 1, x -> 2}"), std::invalid_argument);
    CHECK_THROWS_AS(parse_store_text("{x -> t, y -> x + 1}"), variable_capture);
    CHECK_NOTHROW(parse_store_text("{x -> t, y -> t + 1}"));
}

TEST_CASE("apply_label substitutes stored expressions") {
    CHECK(apply_label(parser("{x -> t + 1}").parse_label_all(), parse_f("x > 0")) ==
          parse_f("t + 1 > 0"));
    formula arbitrary = parse_f("x + y > 3 && !(y = 0)");
    CHECK(apply_label(label(store{}), arbitrary) == arbitrary.normalized());
    CHECK(apply_label(parser(SIGMA2).parse_label_all(), parse_f("s = ((N + 1) * N) / 2")) ==
          parse_f("(2*N - m + 1) * m / 2 = ((N + 1) * N) / 2"));
    CHECK_THROWS_AS(apply_label(label(store{}), parse_f("[ter] true")), unsupported_connective);
}

TEST_CASE("store sequences ground non-temporal formulas at the head world") {
    label l = parser("{x -> -1} . {x -> 0} . {x -> 1}").parse_label_all();
    CHECK(apply_label(l, parse_f("x > 0")) == parse_f("-1 > 0").normalized());
}

TEST_CASE("configuration update rewrites one entry through the store") {
    store s1 = parse_store_text("{n -> N, s -> 0}");
    CHECK(s1.update("s", to_poly(parser("s + n").parse_expr_all())) ==
          parse_store_text("{n -> N, s -> N}"));
    store xt = parse_store_text("{x -> t}");
    CHECK(xt.update("x", to_poly(parser("x + 1").parse_expr_all())) ==
          parse_store_text("{x -> t + 1}"));
    store x5 = parse_store_text("{x -> 5}");
    CHECK(x5.update("x", poly::var("x")) == x5);
}

TEST_CASE("label substitution reproduces the summation instances") {
    store s2 = parse_store_text(SIGMA2);
    substitution zero;
    zero.set("m", poly(rational(0)));
    CHECK(s2.substitute(zero.mapping()) == parse_store_text(SIGMA1));
    substitution succ;
    succ.set("m", to_poly(parser("m + 1").parse_expr_all()));
    CHECK(s2.substitute(succ.mapping()) == parse_store_text(SIGMA4));
    CHECK(s2.substitute(substitution{}.mapping()) == s2);
}

TEST_CASE("substitution composition and identity laws") {
    rng_t rng(5);
    std::vector<std::string> vars{"x", "y", "z"};
    for (int i = 0; i < 50; ++i) {
        poly p = to_poly(rand_expr(rng, vars, 3));
        substitution inner, outer;
        inner.set("x", to_poly(rand_expr(rng, vars, 2)));
        outer.set("y", to_poly(rand_expr(rng, vars, 2)));
        poly two_steps = p.substitute(inner.mapping()).substitute(outer.mapping());
        poly one_step = p.substitute(outer.compose(inner).mapping());
        CHECK(two_steps == one_step);
        CHECK(p.substitute(substitution{}.mapping()) == p);
    }
}

TEST_CASE("match_label solves the summation generalization") {
    sequent tmpl = parser(std::string(SIGMA2) + " : n >= 0 |- " + SIGMA2 +
                          " : [while n > 0 do s := s + n ; n := n - 1 end] s = 0")
                       .parse_sequent_all();
    sequent target = parser(std::string(SIGMA1) + " : n >= 0 |- " + SIGMA1 +
                            " : [while n > 0 do s := s + n ; n := n - 1 end] s = 0")
                         .parse_sequent_all();
    auto theta = match_label(tmpl, target);
    REQUIRE(theta.has_value());
    CHECK(theta->mapping().size() == 1);
    CHECK(*theta->find("m") == poly(rational(0)));
    CHECK(tmpl.substitute(*theta).same_as(target));
}

TEST_CASE("match_label handles identity and self-referential bindings") {
    store tm = parse_store_text("{x -> u}");
    auto id = match_label(tm, tm);
    REQUIRE(id.has_value());
    CHECK(tm.substitute(id->mapping()) == tm);

    store target = parse_store_text("{x -> u * u}");
    auto sq = match_label(tm, target);
    REQUIRE(sq.has_value());
    CHECK(*sq->find("u") == to_poly(parser("u * u").parse_expr_all()));
    CHECK(tm.substitute(sq->mapping()) == target);

    CHECK(!match_label(parse_store_text("{x -> 1}"), parse_store_text("{x -> 2}")).has_value());
}

TEST_CASE("match_label round-trips random substitution instances") {
    rng_t rng(17);
    std::vector<std::string> tvars{"u", "v"};
    for (int i = 0; i < 100; ++i) {
        store tmpl({{"x", poly::var("u")}, {"y", poly::var("v")}});
        substitution theta;
        theta.set("u", to_poly(rand_expr(rng, {"a", "b"}, 2)));
        theta.set("v", to_poly(rand_expr(rng, {"a", "b"}, 2)));
        store target = tmpl.substitute(theta.mapping());
        auto found = match_label(tmpl, target);
        REQUIRE(found.has_value());
        CHECK(tmpl.substitute(found->mapping()) == target);
        // the found substitution agrees with theta on the template's free variables
        for (auto& v : tvars) {
            const poly* got = found->find(v);
            REQUIRE(got != nullptr);
            CHECK(*got == *theta.find(v));
        }
    }
}

TEST_CASE("anti_unify produces reproducing substitutions") {
    fresh_supply fresh;
    {
        auto r = anti_unify(parse_store_text("{x -> 1}"), parse_store_text("{x -> 2}"), fresh);
        CHECK(r.template_.entries().size() == 1);
        std::string u;
        CHECK(r.template_.entries()[0].second.is_variable(&u));
        CHECK(r.template_.substitute(r.theta1.mapping()) == parse_store_text("{x -> 1}"));
        CHECK(r.template_.substitute(r.theta2.mapping()) == parse_store_text("{x -> 2}"));
    }
    {
        store same = parse_store_text("{x -> t}");
        auto r = anti_unify(same, same, fresh);
        CHECK(r.template_ == same);
        CHECK(r.theta1.is_identity());
        CHECK(r.theta2.is_identity());
    }
    {
        store a = parse_store_text("{n -> N, s -> 0}");
        store b = parse_store_text("{n -> N - 1, s -> N}");
        auto r = anti_unify(a, b, fresh);
        for (auto& [x, e] : r.template_.entries()) CHECK(e.is_variable());
        CHECK(r.template_.substitute(r.theta1.mapping()) == a);
        CHECK(r.template_.substitute(r.theta2.mapping()) == b);
    }
    CHECK_THROWS_AS(
        anti_unify(parse_store_text("{x -> 1}"), parse_store_text("{y -> 1}"), fresh),
        std::invalid_argument);
}

TEST_CASE("is_free_label implements the syntactic criterion") {
    std::vector<formula> a{parse_f("x + y > 1")};
    CHECK(is_free_label(parse_store_text("{x -> t + 1}"), a));
    CHECK(!is_free_label(parse_store_text("{x -> 0, y -> 0}"), a));
    CHECK(!is_free_label(parse_store_text("{x -> t, y -> t}"), a));
    CHECK(!is_free_label(parse_store_text("{x -> 2 * t}"), a));       // coefficient not +-1
    CHECK(!is_free_label(parse_store_text("{x -> x1 + 1}"), {parse_f("x1 > 0")})); // occurs in A
    CHECK(is_free_label(parse_store_text("{x -> 0 - t + 3, y -> r}"), a));
}

TEST_CASE("is_free_label is semantically sound on samples") {
    // when the criterion accepts, inverting a*t+b reconstructs a mapping that
    // agrees with any world on the formula set
    rng_t rng(43);
    std::vector<std::string> avars{"x", "y"};
    int accepted = 0;
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<formula> a{rand_atom(rng, avars), rand_atom(rng, avars)};
        int64_t c1 = rand_between(rng, 0, 1) ? 1 : -1;
        int64_t c2 = rand_between(rng, 0, 1) ? 1 : -1;
        poly e1 = poly::var("t1").scaled(rational(c1)) + poly(rational(rand_between(rng, -5, 5)));
        poly e2 = poly::var("t2").scaled(rational(c2)) + poly(rational(rand_between(rng, -5, 5)));
        store sigma({{"x", e1}, {"y", e2}});
        if (!is_free_label(sigma, a)) continue;
        ++accepted;
        for (int k = 0; k < 100; ++k) {
            ground_world w = rand_world(rng, avars, -30, 30);
            // solve t from a*t+b = w(x)
            ground_world base;
            int64_t b1 = e1.substitute({{"t1", poly(rational(0))}}).constant_value().to_int();
            int64_t b2 = e2.substitute({{"t2", poly(rational(0))}}).constant_value().to_int();
            base["t1"] = c1 * (w.at("x") - b1);
            base["t2"] = c2 * (w.at("y") - b2);
            ground_world mapped = sigma.ground(base);
            for (auto& f : a) CHECK(eval_arith_formula(w, f) == eval_arith_formula(mapped, f));
        }
    }
    CHECK(accepted > 10);
}

TEST_CASE("fresh supply avoids declared and emitted names") {
    fresh_supply fresh({"_g1", "_g3"});
    std::string a = fresh.next();
    std::string b = fresh.next();
    CHECK(a != b);
    CHECK(a != "_g1");
    CHECK(b != "_g1");
    std::set<std::string> seen{a, b};
    for (int i = 0; i < 100; ++i) CHECK(seen.insert(fresh.next()).second);
}

TEST_CASE("transitions refuse a terminal source program") {
    CHECK_THROWS_AS(labeled_formula::transition(program::ter(), label(store{}), program::ter(),
                                                label(store{})),
                    std::invalid_argument);
}
