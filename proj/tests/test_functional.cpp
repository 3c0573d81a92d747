#include <doctest.h>

#include <limits>
#include <random>

#include "flatfix/expr.hpp"
#include "flatfix/json_io.hpp"
#include "gen.hpp"

using namespace flatfix;

namespace {

using P = Partial<Int>;

Approximation approx_only_at(Int in, Int out) {
    return [in, out](Int x) { return x == in ? P::value(out) : P::bottom(); };
}

}  // namespace

TEST_CASE("sort errors are caught at construction time") {
    // an integer If-condition
    CHECK_THROWS_AS(if_then_else(lit(1), lit(0), lit(0)), IllFormed);
    // a comparison used as an integer operand
    CHECK_THROWS_AS(bin(BinOp::Add, bin(BinOp::Eq, input(), lit(0)), lit(1)), IllFormed);
    CHECK_THROWS_AS(rec(bin(BinOp::Le, input(), lit(0))), IllFormed);
    CHECK_THROWS_AS(if_then_else(bin(BinOp::Eq, input(), lit(0)), bin(BinOp::Lt, input(), lit(0)), lit(1)),
                    IllFormed);
    // a bare comparison is not an integer body
    CHECK_THROWS_AS(eval_step(bin(BinOp::Eq, input(), lit(0)), bottom_approx(), 0), IllFormed);
}

TEST_CASE("eval_step on the factorial body") {
    ExprPtr fact = f_fact();
    CHECK(eval_step(fact, bottom_approx(), 0) == P::value(1));  // base case, approximation unused
    CHECK(eval_step(fact, bottom_approx(), 5) == P::bottom());  // recursive branch forces Bottom
    CHECK(eval_step(fact, approx_only_at(4, 24), 5) == P::value(120));  // 5 * 24
    CHECK(eval_step(fact, bottom_approx(), 1) == P::bottom());
    CHECK(eval_step(fact, approx_only_at(0, 1), 1) == P::value(1));  // 1 * 1
}

TEST_CASE("If evaluates exactly one branch") {
    // The untaken branch contains a Rec that would force Bottom.
    ExprPtr e = if_then_else(bin(BinOp::Eq, input(), lit(0)), lit(42), rec(input()));
    CHECK(eval_step(e, bottom_approx(), 0) == P::value(42));
    CHECK(eval_step(e, bottom_approx(), 1) == P::bottom());
}

TEST_CASE("strictness: Bottom propagates through every evaluated position") {
    ExprPtr in_arith = bin(BinOp::Add, rec(input()), lit(1));
    CHECK(eval_step(in_arith, bottom_approx(), 7) == P::bottom());
    ExprPtr in_cond = if_then_else(bin(BinOp::Eq, rec(input()), lit(0)), lit(1), lit(2));
    CHECK(eval_step(in_cond, bottom_approx(), 7) == P::bottom());
    ExprPtr in_rec_arg = rec(rec(input()));
    CHECK(eval_step(in_rec_arg, bottom_approx(), 7) == P::bottom());
}

TEST_CASE("a Rec-free expression never returns Bottom") {
    std::mt19937_64 rng(11);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
        // regenerate until Rec-free: cheap at these depths
        ExprPtr e = testgen::random_expr(rng, 3);
        std::function<bool(const ExprPtr&)> has_rec = [&](const ExprPtr& n) {
            if (!n) return false;
            if (n->kind() == FunExpr::Kind::Rec) return true;
            return has_rec(n->left()) || has_rec(n->right()) || has_rec(n->else_branch());
        };
        if (has_rec(e)) continue;
        for (Int x : {-2, 0, 3}) {
            try {
                CHECK(eval_step(e, bottom_approx(), x).is_value());
                ++checked;
            } catch (const OverflowError&) {
                // a fault, not a Bottom; fine
            }
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("overflow is a fault distinct from Bottom") {
    ExprPtr big = lit(std::numeric_limits<Int>::max());
    CHECK_THROWS_AS(eval_step(bin(BinOp::Add, big, lit(1)), bottom_approx(), 0), OverflowError);
    CHECK_THROWS_AS(eval_step(bin(BinOp::Mul, big, lit(2)), bottom_approx(), 0), OverflowError);
    CHECK_THROWS_AS(eval_step(bin(BinOp::Sub, lit(std::numeric_limits<Int>::min()), lit(1)), bottom_approx(), 0),
                    OverflowError);
}

TEST_CASE("monotonicity by construction: a <= b pointwise implies eval_step(e,a) <= eval_step(e,b)") {
    std::mt19937_64 rng(12);
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        ExprPtr e = testgen::random_expr(rng, 4);
        Approximation b = testgen::hash_approx(rng());
        Approximation a = testgen::restrict_approx(b, rng());
        for (Int x = -4; x <= 4; ++x) {
            try {
                P ra = eval_step(e, a, x);
                P rb = eval_step(e, b, x);
                CHECK(leq(ra, rb));
                ++checked;
            } catch (const OverflowError&) {
            }
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("to_table_functional bridges the DSL to tables") {
    SUBCASE("factorial base case only") {
        auto F = to_table_functional(f_fact(), {0}, [](Int v) { return v == 0 || v == 1; });
        Table bot({0});
        Table out = F(bot);
        CHECK(out.at(0) == P::value(1));
    }
    SUBCASE("clip excluding a literal forces Bottom") {
        auto F = to_table_functional(lit(5), {0, 1}, [](Int v) { return v != 5; });
        Table t({0, 1});
        t.set(0, P::value(0));
        CHECK(F(t).is_bottom_everywhere());
    }
    SUBCASE("identity expression is the identity-valued table") {
        auto F = to_table_functional(input(), {0, 1}, [](Int v) { return 0 <= v && v <= 1; });
        Table t({0, 1});
        Table out = F(t);
        CHECK(out.at(0) == P::value(0));
        CHECK(out.at(1) == P::value(1));
    }
    SUBCASE("Rec outside the domain yields Bottom") {
        // rec(input - 1) at 0 calls -1, which is off-domain
        auto F = to_table_functional(rec(bin(BinOp::Sub, input(), lit(1))), {0, 1},
                                     [](Int) { return true; });
        Table full({0, 1});
        full.set(0, P::value(1));
        full.set(1, P::value(1));
        Table out = F(full);
        CHECK(out.at(0).is_bottom());
        CHECK(out.at(1) == P::value(1));  // rec(0) hits the table
    }
    SUBCASE("empty domain is rejected") {
        CHECK_THROWS_AS(to_table_functional(lit(0), {}, [](Int) { return true; }), IllFormed);
    }
}

TEST_CASE("FunExpr JSON round-trips bit-exactly") {
    const char* fact_doc =
        R"(["if", ["=", ["input"], ["lit",0]], ["lit",1], ["*", ["input"], ["rec", ["-", ["input"], ["lit",1]]]]])";
    json j = json::parse(fact_doc);
    ExprPtr e = expr_from_json(j);
    CHECK(expr_equal(e, f_fact()));
    CHECK(expr_to_json(e) == j);
    CHECK(expr_to_json(e).dump() == j.dump());

    std::mt19937_64 rng(13);
    for (int i = 0; i < 300; ++i) {
        ExprPtr r = testgen::random_expr(rng, 4);
        json doc = expr_to_json(r);
        CHECK(expr_equal(expr_from_json(doc), r));
        CHECK(expr_to_json(expr_from_json(doc)).dump() == doc.dump());
    }
}

TEST_CASE("FunExpr JSON rejects malformed documents") {
    CHECK_THROWS_AS(expr_from_json(json::parse(R"(["lit"])")), IllFormed);
    CHECK_THROWS_AS(expr_from_json(json::parse(R"(["lit", "x"])")), IllFormed);
    CHECK_THROWS_AS(expr_from_json(json::parse(R"(["frob", 1])")), IllFormed);
    CHECK_THROWS_AS(expr_from_json(json::parse(R"(42)")), IllFormed);
    CHECK_THROWS_AS(expr_from_json(json::parse(R"(["if", ["lit",1], ["lit",1], ["lit",2]])")), IllFormed);
}
