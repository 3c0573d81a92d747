#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "flatfix/expr.hpp"
#include "flatfix/partial.hpp"

namespace flatfix {

/// The chain u_n = F^n(bot) sampled at one input, with the index at which it
/// first took a Value (if it did within max_fuel).
struct IterTrace {
    Int input = 0;
    std::vector<Partial<Int>> samples;  // samples[n] = F^n(bot)(input)
    std::optional<std::size_t> stabilized_at;
};

/// Result of bounded fixpoint computation. witness is present iff result is a
/// Value, and is the minimal iteration count at which the Value appears.
struct FixOutcome {
    Partial<Int> result;
    std::optional<std::size_t> witness;
};

/// F^n(bot) as a callable approximation, built by chaining eval_step closures.
/// iterate(e, 0) is the everywhere-Bottom map. The returned closure caches
/// per-level results internally (thread-safe, observably pure).
Approximation iterate(const ExprPtr& e, std::size_t n);

/// F^n(bot)(x) computed by direct recursion with a per-call fuel decrement:
/// a Rec call with zero fuel left yields Bottom. Agrees with iterate(e, n)(x);
/// the two are kept as independent engines and tested against each other.
Partial<Int> approx(const ExprPtr& e, std::size_t fuel, Int x);

/// Scan n = 0..max_fuel for the first Value of approx(e, n, x). A Value result
/// is the true least-fixpoint value at x (a flat chain cannot change once a
/// Value appears); a Bottom result only means "no result within max_fuel".
FixOutcome fix(const ExprPtr& e, std::size_t max_fuel, Int x);

/// The genuine recursive realization: each Rec re-enters the evaluator.
/// Throws GuardExceeded when the recursion depth passes `guard` -- the
/// realization cannot observe divergence, it can only be cut off. Guard
/// counts body entries, so a successful run at guard g implies fix with
/// max_fuel g finds the same Value.
Partial<Int> run_unbounded(const ExprPtr& e, Int x, std::size_t guard);

/// Record samples[n] = approx(e, n, x) for n in [0, max_fuel].
IterTrace trace(const ExprPtr& e, std::size_t max_fuel, Int x);

}  // namespace flatfix
