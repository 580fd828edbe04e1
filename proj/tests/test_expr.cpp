#include "test_util.hpp"

#include <doctest.h>

using namespace dlp;
using namespace dlp::testing;

namespace {

expr parse_e(const std::string& s) { return parser(s).parse_expr_all(); }

} // namespace

TEST_CASE("rational arithmetic is exact and reduced") {
    rational a(1, 2), b(1, 3);
    CHECK((a + b) == rational(5, 6));
    CHECK((a * b) == rational(1, 6));
    CHECK((a - a).is_zero());
    CHECK(rational(2, 4) == rational(1, 2));
    CHECK(rational(-1, -2) == rational(1, 2));
    CHECK(rational(1, -2) < rational(0));
    CHECK_THROWS_AS(rational(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(rational(1, 2).to_int(), non_integral_division);
}

TEST_CASE("successive loop labels of the summation have equal normal forms") {
    // (2N-m+1)*m/2 + (N-m) and (2N-(m+1)+1)*(m+1)/2 agree
    expr lhs = parse_e("(2*N - m + 1) * m / 2 + (N - m)");
    expr rhs = parse_e("(2*N - (m + 1) + 1) * (m + 1) / 2");
    CHECK(to_poly(lhs) == to_poly(rhs));
    CHECK(normalize_expr(lhs).to_string() == normalize_expr(rhs).to_string());
}

TEST_CASE("additive identity and product expansion normalize away") {
    CHECK(to_poly(parse_e("x + 0")) == to_poly(parse_e("x")));
    CHECK(to_poly(parse_e("(x + 1) * (x - 1)")) == to_poly(parse_e("x * x - 1")));
}

TEST_CASE("product expansion agrees with evaluation at 100 random points") {
    rng_t rng(7);
    expr a = parse_e("(x + 1) * (x - 1)");
    expr b = parse_e("x * x - 1");
    for (int i = 0; i < 100; ++i) {
        std::map<std::string, int64_t> g{{"x", rand_between(rng, -50, 50)}};
        CHECK(eval_expr(a, g) == eval_expr(b, g));
    }
}

TEST_CASE("normalize is idempotent and evaluation-sound on random expressions") {
    rng_t rng(11);
    std::vector<std::string> vars{"x", "y", "z", "w"};
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        expr e = rand_expr(rng, vars, 5);
        poly p = to_poly(e);
        expr n = normalize_expr(e);
        CHECK(to_poly(n) == p);
        CHECK(normalize_expr(n).to_string() == n.to_string());
        for (int k = 0; k < 20; ++k) {
            auto g = rand_world(rng, vars, -50, 50);
            std::map<std::string, rational> rg;
            for (auto& [v, val] : g) rg.emplace(v, rational(val));
            int64_t direct;
            try {
                direct = eval_expr(e, g);
            } catch (non_integral_division&) {
                continue; // the raw expression has no integer value here
            } catch (arith_overflow&) {
                continue;
            }
            CHECK(p.eval(rg) == rational(direct));
            ++checked;
        }
    }
    CHECK(checked > 500);
}

TEST_CASE("ground evaluation follows the summation example") {
    std::map<std::string, int64_t> g{{"N", 4}, {"m", 4}};
    CHECK(eval_expr(parse_e("(2*N - m + 1) * m / 2"), g) == 10);
    CHECK(eval_expr(parse_e("x"), {{"x", 7}}) == 7);
    CHECK_THROWS_AS(eval_expr(parse_e("x / 2"), {{"x", 3}}), non_integral_division);
    CHECK_THROWS_AS(expr::divk(expr::var("x"), 0), std::invalid_argument);
}

TEST_CASE("substitution law: eval(subst(e,[r/x]), g) == eval(e, g[x := eval(r,g)])") {
    rng_t rng(23);
    std::vector<std::string> vars{"x", "y", "z", "w"};
    int checked = 0;
    for (int i = 0; i < 150; ++i) {
        expr e = rand_expr(rng, vars, 4);
        expr r = rand_expr(rng, vars, 2);
        std::string x = rand_var(rng, vars);
        poly substituted = to_poly(e).substitute({{x, to_poly(r)}});
        for (int k = 0; k < 10; ++k) {
            auto g = rand_world(rng, vars, -20, 20);
            std::map<std::string, rational> rg;
            for (auto& [v, val] : g) rg.emplace(v, rational(val));
            try {
                rational rv = to_poly(r).eval(rg);
                auto rg2 = rg;
                rg2[x] = rv;
                CHECK(substituted.eval(rg) == to_poly(e).eval(rg2));
                ++checked;
            } catch (arith_overflow&) {
            }
        }
    }
    CHECK(checked > 500);
}

TEST_CASE("canonical printing round-trips through the grammar") {
    rng_t rng(31);
    std::vector<std::string> vars{"x", "y", "N", "m"};
    for (int i = 0; i < 200; ++i) {
        poly p = to_poly(rand_expr(rng, vars, 4));
        std::string text = p.to_string();
        CHECK(to_poly(parser(text).parse_expr_all()) == p);
    }
}
