#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "flatfix/fun_table.hpp"
#include "flatfix/partial.hpp"

namespace flatfix {

using Int = std::int64_t;

enum class BinOp { Add, Sub, Mul, Eq, Lt, Le };

constexpr bool is_comparison(BinOp op) {
    return op == BinOp::Eq || op == BinOp::Lt || op == BinOp::Le;
}

class FunExpr;
using ExprPtr = std::shared_ptr<const FunExpr>;

/// Body of a one-argument recursive definition over integers. Rec denotes a
/// call to the function being defined; one application of the body against an
/// approximation of that function is one step of the associated functional.
///
/// Sorts are enforced at construction: comparisons are the only boolean
/// producers and may appear only as If conditions; everything else is
/// integer-sorted. A tree built through the factories below therefore
/// evaluates monotonically in its approximation by construction.
class FunExpr {
public:
    enum class Kind { Lit, Input, Bin, If, Rec };

    static ExprPtr lit(Int v);
    static ExprPtr input();
    static ExprPtr bin(BinOp op, ExprPtr left, ExprPtr right);
    static ExprPtr if_then_else(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch);
    static ExprPtr rec(ExprPtr arg);

    Kind kind() const { return kind_; }
    Int lit_value() const { return value_; }
    BinOp op() const { return op_; }
    const ExprPtr& left() const { return a_; }
    const ExprPtr& right() const { return b_; }
    const ExprPtr& cond() const { return a_; }
    const ExprPtr& then_branch() const { return b_; }
    const ExprPtr& else_branch() const { return c_; }
    const ExprPtr& rec_arg() const { return a_; }

    // A comparison node denotes a boolean; every other node denotes an integer.
    bool denotes_bool() const { return kind_ == Kind::Bin && is_comparison(op_); }

private:
    FunExpr(Kind k, Int v, BinOp op, ExprPtr a, ExprPtr b, ExprPtr c)
        : kind_(k), value_(v), op_(op), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {}

    Kind kind_;
    Int value_ = 0;
    BinOp op_ = BinOp::Add;
    ExprPtr a_, b_, c_;
};

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

// Convenience builders.
inline ExprPtr lit(Int v) { return FunExpr::lit(v); }
inline ExprPtr input() { return FunExpr::input(); }
inline ExprPtr bin(BinOp op, ExprPtr l, ExprPtr r) { return FunExpr::bin(op, std::move(l), std::move(r)); }
inline ExprPtr if_then_else(ExprPtr c, ExprPtr t, ExprPtr e) {
    return FunExpr::if_then_else(std::move(c), std::move(t), std::move(e));
}
inline ExprPtr rec(ExprPtr a) { return FunExpr::rec(std::move(a)); }

/// The current iterate F^n(bot): a total map from inputs to lifted results.
using Approximation = std::function<Partial<Int>(Int)>;

/// The everywhere-Bottom approximation, F^0(bot).
Approximation bottom_approx();

/// One application of the functional denoted by `e` to `approx`, at input x.
/// Call-by-value: any Bottom produced on an evaluated path (including Rec
/// calls through `approx`) makes the result Bottom. If evaluates exactly one
/// branch. Throws OverflowError on arithmetic outside int64 (a fault, not
/// Bottom) and IllFormed if `e` denotes a boolean.
Partial<Int> eval_step(const ExprPtr& e, const Approximation& approx, Int x);

/// The factorial body: if input = 0 then 1 else input * rec(input - 1).
ExprPtr f_fact();

using Table = FiniteFunTable<Int, Int>;
using TableFn = std::function<Table(const Table&)>;
using ClipFn = std::function<bool(Int)>;

/// Bridge from the DSL to the finite checker: a table-to-table map where Rec
/// calls outside `domain` yield Bottom and any integer produced by a
/// Lit/Input/BinOp node outside `clip` yields Bottom. With clip contained in
/// a space's codomain, the result is total on that space.
TableFn to_table_functional(ExprPtr e, std::vector<Int> domain, ClipFn clip);

}  // namespace flatfix
