#include "flatfix/kleene.hpp"

#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>

#include "flatfix/errors.hpp"

namespace flatfix {

namespace {

Int add_ovf(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in +");
    return r;
}

Int sub_ovf(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in -");
    return r;
}

Int mul_ovf(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in *");
    return r;
}

struct FuelKey {
    std::size_t fuel;
    Int x;
    bool operator==(const FuelKey&) const = default;
};

struct FuelKeyHash {
    std::size_t operator()(const FuelKey& k) const {
        std::size_t h = std::hash<std::size_t>{}(k.fuel);
        return h ^ (std::hash<Int>{}(k.x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
};

using FuelMemo = std::unordered_map<FuelKey, Partial<Int>, FuelKeyHash>;

// Fueled evaluator. Distinct from eval_step on purpose: this one threads the
// fuel through a single recursion instead of building closures, so the
// equivalence with iterate() is a real cross-check. The memo only dedups
// identical (fuel, input) subcomputations within one top-level call.
class FueledEval {
public:
    explicit FueledEval(const FunExpr& body) : body_(body) {}

    Partial<Int> level(std::size_t fuel, Int x) {
        if (fuel == 0) return Partial<Int>::bottom();
        FuelKey key{fuel, x};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Partial<Int> r = ev(body_, fuel, x);
        memo_.emplace(key, r);
        return r;
    }

private:
    Partial<Int> ev(const FunExpr& e, std::size_t fuel, Int x) {
        switch (e.kind()) {
            case FunExpr::Kind::Lit:
                return Partial<Int>::value(e.lit_value());
            case FunExpr::Kind::Input:
                return Partial<Int>::value(x);
            case FunExpr::Kind::Bin: {
                Partial<Int> l = ev(*e.left(), fuel, x);
                if (l.is_bottom()) return l;
                Partial<Int> r = ev(*e.right(), fuel, x);
                if (r.is_bottom()) return r;
                switch (e.op()) {
                    case BinOp::Add: return Partial<Int>::value(add_ovf(l.get(), r.get()));
                    case BinOp::Sub: return Partial<Int>::value(sub_ovf(l.get(), r.get()));
                    case BinOp::Mul: return Partial<Int>::value(mul_ovf(l.get(), r.get()));
                    default: throw IllFormed("approx: comparison in integer position");
                }
            }
            case FunExpr::Kind::If: {
                const FunExpr& c = *e.cond();
                Partial<Int> l = ev(*c.left(), fuel, x);
                if (l.is_bottom()) return l;
                Partial<Int> r = ev(*c.right(), fuel, x);
                if (r.is_bottom()) return r;
                bool taken;
                switch (c.op()) {
                    case BinOp::Eq: taken = l.get() == r.get(); break;
                    case BinOp::Lt: taken = l.get() < r.get(); break;
                    case BinOp::Le: taken = l.get() <= r.get(); break;
                    default: throw IllFormed("approx: arithmetic op in boolean position");
                }
                return ev(taken ? *e.then_branch() : *e.else_branch(), fuel, x);
            }
            case FunExpr::Kind::Rec: {
                Partial<Int> arg = ev(*e.rec_arg(), fuel, x);
                if (arg.is_bottom()) return arg;
                return level(fuel - 1, arg.get());
            }
        }
        throw IllFormed("approx: unknown node kind");
    }

    const FunExpr& body_;
    FuelMemo memo_;
};

}  // namespace

Approximation iterate(const ExprPtr& e, std::size_t n) {
    if (!e) throw IllFormed("iterate: null expression");
    if (e->denotes_bool()) throw IllFormed("iterate: body denotes a boolean, not an integer");
    Approximation cur = bottom_approx();
    for (std::size_t k = 0; k < n; ++k) {
        struct Level {
            ExprPtr body;
            Approximation below;
            std::shared_ptr<std::mutex> mu = std::make_shared<std::mutex>();
            std::shared_ptr<std::unordered_map<Int, Partial<Int>>> cache =
                std::make_shared<std::unordered_map<Int, Partial<Int>>>();

            Partial<Int> operator()(Int x) const {
                {
                    std::lock_guard<std::mutex> lock(*mu);
                    if (auto it = cache->find(x); it != cache->end()) return it->second;
                }
                Partial<Int> r = eval_step(body, below, x);
                std::lock_guard<std::mutex> lock(*mu);
                cache->emplace(x, r);
                return r;
            }
        };
        cur = Level{e, std::move(cur)};
    }
    return cur;
}

Partial<Int> approx(const ExprPtr& e, std::size_t fuel, Int x) {
    if (!e) throw IllFormed("approx: null expression");
    if (e->denotes_bool()) throw IllFormed("approx: body denotes a boolean, not an integer");
    FueledEval engine(*e);
    return engine.level(fuel, x);
}

FixOutcome fix(const ExprPtr& e, std::size_t max_fuel, Int x) {
    // Flat chains cannot lose a Value: Bottom at max_fuel means Bottom at
    // every smaller fuel, so the top of the chain decides whether to scan.
    if (approx(e, max_fuel, x).is_bottom()) {
        return FixOutcome{Partial<Int>::bottom(), std::nullopt};
    }
    for (std::size_t n = 0; n <= max_fuel; ++n) {
        Partial<Int> r = approx(e, n, x);
        if (r.is_value()) return FixOutcome{r, n};
    }
    return FixOutcome{Partial<Int>::bottom(), std::nullopt};
}

namespace {

class UnboundedEval {
public:
    UnboundedEval(const FunExpr& body, std::size_t guard) : body_(body), guard_(guard) {}

    Partial<Int> run(Int x, std::size_t depth) {
        if (depth > guard_) throw GuardExceeded("recursion depth guard exceeded");
        return ev(body_, x, depth);
    }

private:
    Partial<Int> ev(const FunExpr& e, Int x, std::size_t depth) {
        switch (e.kind()) {
            case FunExpr::Kind::Lit:
                return Partial<Int>::value(e.lit_value());
            case FunExpr::Kind::Input:
                return Partial<Int>::value(x);
            case FunExpr::Kind::Bin: {
                Partial<Int> l = ev(*e.left(), x, depth);
                if (l.is_bottom()) return l;
                Partial<Int> r = ev(*e.right(), x, depth);
                if (r.is_bottom()) return r;
                switch (e.op()) {
                    case BinOp::Add: return Partial<Int>::value(add_ovf(l.get(), r.get()));
                    case BinOp::Sub: return Partial<Int>::value(sub_ovf(l.get(), r.get()));
                    case BinOp::Mul: return Partial<Int>::value(mul_ovf(l.get(), r.get()));
                    default: throw IllFormed("run_unbounded: comparison in integer position");
                }
            }
            case FunExpr::Kind::If: {
                const FunExpr& c = *e.cond();
                Partial<Int> l = ev(*c.left(), x, depth);
                if (l.is_bottom()) return l;
                Partial<Int> r = ev(*c.right(), x, depth);
                if (r.is_bottom()) return r;
                bool taken;
                switch (c.op()) {
                    case BinOp::Eq: taken = l.get() == r.get(); break;
                    case BinOp::Lt: taken = l.get() < r.get(); break;
                    case BinOp::Le: taken = l.get() <= r.get(); break;
                    default: throw IllFormed("run_unbounded: arithmetic op in boolean position");
                }
                return ev(taken ? *e.then_branch() : *e.else_branch(), x, depth);
            }
            case FunExpr::Kind::Rec: {
                Partial<Int> arg = ev(*e.rec_arg(), x, depth);
                if (arg.is_bottom()) return arg;
                return run(arg.get(), depth + 1);
            }
        }
        throw IllFormed("run_unbounded: unknown node kind");
    }

    const FunExpr& body_;
    std::size_t guard_;
};

}  // namespace

Partial<Int> run_unbounded(const ExprPtr& e, Int x, std::size_t guard) {
    if (!e) throw IllFormed("run_unbounded: null expression");
    if (e->denotes_bool()) throw IllFormed("run_unbounded: body denotes a boolean, not an integer");
    if (guard == 0) throw IllFormed("run_unbounded: guard must be positive");
    UnboundedEval engine(*e, guard);
    return engine.run(x, 1);
}

IterTrace trace(const ExprPtr& e, std::size_t max_fuel, Int x) {
    IterTrace t;
    t.input = x;
    t.samples.reserve(max_fuel + 1);
    for (std::size_t n = 0; n <= max_fuel; ++n) {
        Partial<Int> r = approx(e, n, x);
        if (r.is_value() && !t.stabilized_at) t.stabilized_at = n;
        t.samples.push_back(std::move(r));
    }
    return t;
}

}  // namespace flatfix
