#include "flatfix/expr.hpp"

#include <utility>

#include "flatfix/errors.hpp"

namespace flatfix {

namespace {

Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in +");
    return r;
}

Int checked_sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in -");
    return r;
}

Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in *");
    return r;
}

void require_int(const ExprPtr& e, const char* where) {
    if (!e) throw IllFormed(std::string(where) + ": null subexpression");
    if (e->denotes_bool()) throw IllFormed(std::string(where) + ": comparison used where an integer is required");
}

}  // namespace

// Factories funnel every construction through the sort checks.
ExprPtr FunExpr::lit(Int v) {
    return ExprPtr(new FunExpr(Kind::Lit, v, BinOp::Add, nullptr, nullptr, nullptr));
}

ExprPtr FunExpr::input() {
    return ExprPtr(new FunExpr(Kind::Input, 0, BinOp::Add, nullptr, nullptr, nullptr));
}

ExprPtr FunExpr::bin(BinOp op, ExprPtr left, ExprPtr right) {
    require_int(left, "bin");
    require_int(right, "bin");
    return ExprPtr(new FunExpr(Kind::Bin, 0, op, std::move(left), std::move(right), nullptr));
}

ExprPtr FunExpr::if_then_else(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch) {
    if (!cond) throw IllFormed("if: null condition");
    if (!cond->denotes_bool()) throw IllFormed("if: condition must be a comparison");
    require_int(then_branch, "if");
    require_int(else_branch, "if");
    return ExprPtr(new FunExpr(Kind::If, 0, BinOp::Add, std::move(cond), std::move(then_branch),
                               std::move(else_branch)));
}

ExprPtr FunExpr::rec(ExprPtr arg) {
    require_int(arg, "rec");
    return ExprPtr(new FunExpr(Kind::Rec, 0, BinOp::Add, std::move(arg), nullptr, nullptr));
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
        case FunExpr::Kind::Lit:
            return a->lit_value() == b->lit_value();
        case FunExpr::Kind::Input:
            return true;
        case FunExpr::Kind::Bin:
            return a->op() == b->op() && expr_equal(a->left(), b->left()) && expr_equal(a->right(), b->right());
        case FunExpr::Kind::If:
            return expr_equal(a->cond(), b->cond()) && expr_equal(a->then_branch(), b->then_branch()) &&
                   expr_equal(a->else_branch(), b->else_branch());
        case FunExpr::Kind::Rec:
            return expr_equal(a->rec_arg(), b->rec_arg());
    }
    return false;
}

Approximation bottom_approx() {
    return [](Int) { return Partial<Int>::bottom(); };
}

namespace {

// Core strict evaluator, shared by eval_step and the table bridge. `recall`
// supplies the meaning of Rec; `clip` (optional) filters every integer a
// Lit/Input/BinOp node produces.
template <typename RecallFn>
Partial<Int> ev_int(const FunExpr& e, Int x, const RecallFn& recall, const ClipFn* clip);

template <typename RecallFn>
Partial<bool> ev_bool(const FunExpr& e, Int x, const RecallFn& recall, const ClipFn* clip) {
    // The factories only admit comparisons in boolean position.
    Partial<Int> l = ev_int(*e.left(), x, recall, clip);
    if (l.is_bottom()) return Partial<bool>::bottom();
    Partial<Int> r = ev_int(*e.right(), x, recall, clip);
    if (r.is_bottom()) return Partial<bool>::bottom();
    switch (e.op()) {
        case BinOp::Eq: return Partial<bool>::value(l.get() == r.get());
        case BinOp::Lt: return Partial<bool>::value(l.get() < r.get());
        case BinOp::Le: return Partial<bool>::value(l.get() <= r.get());
        default: throw IllFormed("eval: arithmetic op in boolean position");
    }
}

Partial<Int> clipped(Partial<Int> v, const ClipFn* clip) {
    if (clip && v.is_value() && !(*clip)(v.get())) return Partial<Int>::bottom();
    return v;
}

template <typename RecallFn>
Partial<Int> ev_int(const FunExpr& e, Int x, const RecallFn& recall, const ClipFn* clip) {
    switch (e.kind()) {
        case FunExpr::Kind::Lit:
            return clipped(Partial<Int>::value(e.lit_value()), clip);
        case FunExpr::Kind::Input:
            return clipped(Partial<Int>::value(x), clip);
        case FunExpr::Kind::Bin: {
            Partial<Int> l = ev_int(*e.left(), x, recall, clip);
            if (l.is_bottom()) return l;
            Partial<Int> r = ev_int(*e.right(), x, recall, clip);
            if (r.is_bottom()) return r;
            Int v;
            switch (e.op()) {
                case BinOp::Add: v = checked_add(l.get(), r.get()); break;
                case BinOp::Sub: v = checked_sub(l.get(), r.get()); break;
                case BinOp::Mul: v = checked_mul(l.get(), r.get()); break;
                default: throw IllFormed("eval: comparison used where an integer is required");
            }
            return clipped(Partial<Int>::value(v), clip);
        }
        case FunExpr::Kind::If: {
            Partial<bool> c = ev_bool(*e.cond(), x, recall, clip);
            if (c.is_bottom()) return Partial<Int>::bottom();
            const FunExpr& taken = c.get() ? *e.then_branch() : *e.else_branch();
            return ev_int(taken, x, recall, clip);
        }
        case FunExpr::Kind::Rec: {
            Partial<Int> arg = ev_int(*e.rec_arg(), x, recall, clip);
            if (arg.is_bottom()) return arg;
            return recall(arg.get());
        }
    }
    throw IllFormed("eval: unknown node kind");
}

}  // namespace

Partial<Int> eval_step(const ExprPtr& e, const Approximation& approx, Int x) {
    if (!e) throw IllFormed("eval_step: null expression");
    if (e->denotes_bool()) throw IllFormed("eval_step: body denotes a boolean, not an integer");
    auto recall = [&approx](Int v) { return approx(v); };
    return ev_int(*e, x, recall, nullptr);
}

ExprPtr f_fact() {
    return if_then_else(bin(BinOp::Eq, input(), lit(0)), lit(1),
                        bin(BinOp::Mul, input(), rec(bin(BinOp::Sub, input(), lit(1)))));
}

TableFn to_table_functional(ExprPtr e, std::vector<Int> domain, ClipFn clip) {
    if (!e) throw IllFormed("to_table_functional: null expression");
    if (e->denotes_bool()) throw IllFormed("to_table_functional: body denotes a boolean, not an integer");
    if (domain.empty()) throw IllFormed("to_table_functional: empty domain");
    return [e = std::move(e), domain = std::move(domain), clip = std::move(clip)](const Table& t) {
        Table out(domain);
        auto recall = [&t](Int v) {
            for (Int d : t.domain()) {
                if (d == v) return t.at(v);
            }
            return Partial<Int>::bottom();
        };
        for (Int x : domain) {
            out.set(x, ev_int(*e, x, recall, &clip));
        }
        return out;
    };
}

}  // namespace flatfix
