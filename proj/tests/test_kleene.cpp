#include <doctest.h>

#include <random>

#include "flatfix/json_io.hpp"
#include "flatfix/kleene.hpp"
#include "gen.hpp"

using namespace flatfix;

namespace {
using P = Partial<Int>;

Int fact_oracle(Int n) {
    Int r = 1;
    for (Int i = 2; i <= n; ++i) r *= i;
    return r;
}
}  // namespace

TEST_CASE("iterate: explicit Kleene iterates of the factorial functional") {
    ExprPtr fact = f_fact();
    CHECK(iterate(fact, 0)(5) == P::bottom());
    CHECK(iterate(fact, 0)(0) == P::bottom());
    CHECK(iterate(fact, 1)(0) == P::value(1));
    CHECK(iterate(fact, 6)(5) == P::value(fact_oracle(5)));
    CHECK(iterate(fact, 5)(5) == P::bottom());  // one unfolding short
}

TEST_CASE("approx: fueled recursion matches the stated examples") {
    ExprPtr fact = f_fact();
    CHECK(approx(fact, 0, 5) == P::bottom());
    CHECK(approx(fact, 6, 5) == P::value(120));
    CHECK(approx(fact, 50, -3) == P::bottom());
    CHECK(approx(fact, 21, 20) == P::value(fact_oracle(20)));  // largest factorial in int64
}

TEST_CASE("fix: minimal witness by upward scan") {
    ExprPtr fact = f_fact();

    FixOutcome five = fix(fact, 100, 5);
    CHECK(five.result == P::value(120));
    CHECK(five.witness == 6);

    FixOutcome zero = fix(fact, 100, 0);
    CHECK(zero.result == P::value(1));
    CHECK(zero.witness == 1);

    FixOutcome neg = fix(fact, 100, -1);
    CHECK(neg.result == P::bottom());
    CHECK_FALSE(neg.witness.has_value());
}

TEST_CASE("run_unbounded: the recursive realization") {
    ExprPtr fact = f_fact();
    CHECK(run_unbounded(fact, 5, 1000) == P::value(120));
    CHECK(run_unbounded(fact, 0, 1) == P::value(1));  // base case needs no recursion
    CHECK_THROWS_AS(run_unbounded(fact, -1, 1000), GuardExceeded);
    CHECK_THROWS_AS(run_unbounded(fact, 5, 0), IllFormed);  // guard must be positive
}

TEST_CASE("trace records the chain and its stabilization index") {
    ExprPtr fact = f_fact();

    IterTrace t = trace(fact, 3, 2);
    REQUIRE(t.samples.size() == 4);
    CHECK(t.samples[0] == P::bottom());
    CHECK(t.samples[1] == P::bottom());
    CHECK(t.samples[2] == P::bottom());
    CHECK(t.samples[3] == P::value(2));
    CHECK(t.stabilized_at == 3);
    CHECK(is_ascending<Int>(t.samples));

    IterTrace neg = trace(fact, 3, -1);
    for (const auto& s : neg.samples) CHECK(s == P::bottom());
    CHECK_FALSE(neg.stabilized_at.has_value());

    IterTrace constant = trace(lit(7), 2, 0);
    REQUIRE(constant.samples.size() == 3);
    CHECK(constant.samples[0] == P::bottom());
    CHECK(constant.samples[1] == P::value(7));
    CHECK(constant.samples[2] == P::value(7));
    CHECK(constant.stabilized_at == 1);
}

TEST_CASE("trace JSON") {
    json j = trace_to_json(trace(f_fact(), 3, 2));
    CHECK(j == json::parse(R"({"input":2,"samples":[null,null,null,2],"stabilized_at":3})"));
    json none = trace_to_json(trace(f_fact(), 2, -1));
    CHECK(none == json::parse(R"({"input":-1,"samples":[null,null,null],"stabilized_at":null})"));
}

TEST_CASE("property: iterates form a chain and stabilize") {
    std::mt19937_64 rng(21);
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        ExprPtr e = testgen::random_expr(rng, 4);
        for (Int x : {-2, 0, 1, 3}) {
            try {
                P prev = approx(e, 0, x);
                P first_value = P::bottom();
                for (std::size_t n = 1; n <= 14; ++n) {
                    P cur = approx(e, n, x);
                    CHECK(leq(prev, cur));
                    if (first_value.is_bottom() && cur.is_value()) first_value = cur;
                    if (first_value.is_value()) CHECK(cur == first_value);
                    prev = cur;
                }
                ++checked;
            } catch (const OverflowError&) {
            }
        }
    }
    CHECK(checked > 400);
}

TEST_CASE("property: approx equals iterate (engine equivalence)") {
    std::mt19937_64 rng(22);
    int checked = 0;
    for (int i = 0; i < 150; ++i) {
        ExprPtr e = testgen::random_expr(rng, 4);
        for (std::size_t n = 0; n <= 10; ++n) {
            Approximation it = iterate(e, n);
            for (Int x : {-2, -1, 0, 1, 2}) {
                P via_fuel, via_chain;
                bool fuel_overflowed = false, chain_overflowed = false;
                try {
                    via_fuel = approx(e, n, x);
                } catch (const OverflowError&) {
                    fuel_overflowed = true;
                }
                try {
                    via_chain = it(x);
                } catch (const OverflowError&) {
                    chain_overflowed = true;
                }
                CHECK(fuel_overflowed == chain_overflowed);
                if (!fuel_overflowed) {
                    CHECK(via_fuel == via_chain);
                    ++checked;
                }
            }
        }
    }
    CHECK(checked > 2000);
}

TEST_CASE("property: realization soundness (run_unbounded agrees with fix)") {
    std::mt19937_64 rng(23);
    int agreed = 0;
    for (int i = 0; i < 200; ++i) {
        ExprPtr e = testgen::random_expr(rng, 3);
        for (Int x : {-1, 0, 1, 2}) {
            constexpr std::size_t guard = 64;
            P realized;
            try {
                realized = run_unbounded(e, x, guard);
            } catch (const GuardExceeded&) {
                continue;
            } catch (const OverflowError&) {
                continue;
            }
            if (realized.is_bottom()) continue;
            FixOutcome out = fix(e, guard, x);
            CHECK(out.result == realized);
            ++agreed;
        }
    }
    CHECK(agreed > 200);
}

TEST_CASE("property: bounded non-termination transfers to fix") {
    std::mt19937_64 rng(24);
    for (int i = 0; i < 100; ++i) {
        ExprPtr e = testgen::random_expr(rng, 3);
        for (Int x : {-2, 1}) {
            constexpr std::size_t bound = 12;
            try {
                bool all_bottom = true;
                for (std::size_t n = 0; n <= bound; ++n) {
                    if (approx(e, n, x).is_value()) {
                        all_bottom = false;
                        break;
                    }
                }
                if (all_bottom) {
                    FixOutcome out = fix(e, bound, x);
                    CHECK(out.result == P::bottom());
                    CHECK_FALSE(out.witness.has_value());
                }
            } catch (const OverflowError&) {
            }
        }
    }
}

TEST_CASE("fact never terminates on negatives, bounded form") {
    ExprPtr fact = f_fact();
    for (Int x = -20; x <= -1; ++x) {
        for (std::size_t n = 0; n <= 50; n += 10) {
            CHECK(approx(fact, n, x) == P::bottom());
        }
        CHECK_THROWS_AS(run_unbounded(fact, x, 10000), GuardExceeded);
    }
}
