#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "flatfix/errors.hpp"
#include "flatfix/partial.hpp"

namespace flatfix::imp {

using Int = std::int64_t;

// ---------------------------------------------------------------------------
// Abstract syntax
// ---------------------------------------------------------------------------

struct AExp;
struct BExp;
struct Com;
using AExpPtr = std::shared_ptr<const AExp>;
using BExpPtr = std::shared_ptr<const BExp>;
using ComPtr = std::shared_ptr<const Com>;

struct AExp {
    enum class Kind { IntLit, Var, Plus, Minus, Times };

    static AExpPtr lit(Int v);
    static AExpPtr var(std::string name);  // throws IllFormed on a bad identifier
    static AExpPtr plus(AExpPtr l, AExpPtr r);
    static AExpPtr minus(AExpPtr l, AExpPtr r);
    static AExpPtr times(AExpPtr l, AExpPtr r);

    Kind kind;
    Int value = 0;
    std::string name;
    AExpPtr left, right;
};

struct BExp {
    enum class Kind { BoolLit, Eq, Le, Not, And };

    static BExpPtr lit(bool v);
    static BExpPtr eq(AExpPtr l, AExpPtr r);
    static BExpPtr le(AExpPtr l, AExpPtr r);
    static BExpPtr negation(BExpPtr b);
    static BExpPtr conj(BExpPtr l, BExpPtr r);

    Kind kind;
    bool bvalue = false;
    AExpPtr aleft, aright;
    BExpPtr bleft, bright;
};

struct Com {
    enum class Kind { Skip, Assign, Seq, If, While };

    static ComPtr skip();
    static ComPtr assign(std::string name, AExpPtr e);
    static ComPtr seq(ComPtr first, ComPtr second);
    static ComPtr if_then_else(BExpPtr cond, ComPtr then_branch, ComPtr else_branch);
    static ComPtr while_do(BExpPtr cond, ComPtr body);

    Kind kind;
    std::string name;
    AExpPtr aexp;
    BExpPtr bexp;
    ComPtr first, second;
};

bool aexp_equal(const AExpPtr&, const AExpPtr&);
bool bexp_equal(const BExpPtr&, const BExpPtr&);
bool com_equal(const ComPtr&, const ComPtr&);

bool valid_identifier(std::string_view name);

// ---------------------------------------------------------------------------
// Store
// ---------------------------------------------------------------------------

/// Finite map from identifiers to integers. Reading an unbound identifier is
/// a fault (UndefinedVariable), never a default.
class State {
public:
    State() = default;

    Int get(const std::string& name) const;
    void set(const std::string& name, Int v);  // validates the identifier
    bool contains(const std::string& name) const { return vars_.contains(name); }

    const std::map<std::string, Int>& vars() const { return vars_; }

    friend bool operator==(const State&, const State&) = default;

private:
    std::map<std::string, Int> vars_;
};

// ---------------------------------------------------------------------------
// Expression semantics (total, up to faults)
// ---------------------------------------------------------------------------

Int aeval(const AExpPtr& e, const State& s);
bool beval(const BExpPtr& b, const State& s);

// ---------------------------------------------------------------------------
// Concrete syntax
// ---------------------------------------------------------------------------

/// Parse the concrete grammar (see the pretty-printer for the canonical
/// form). Throws SyntaxError with line/column on malformed input.
ComPtr parse(std::string_view text);

/// Canonical concrete syntax; parse(pretty(c)) == c for every parser-producible
/// tree (Seq chains are right-nested, as the grammar requires).
std::string pretty(const ComPtr& c);
std::string pretty(const AExpPtr& e);
std::string pretty(const BExpPtr& b);

// ---------------------------------------------------------------------------
// Two semantics
// ---------------------------------------------------------------------------

/// Denotational interpreter. Structural recursion on the command; each While
/// is the bounded Kleene iterate of its loop functional, unrolled `fuel`
/// times from Bottom. Bottom means "no result within fuel"; faults
/// (UndefinedVariable, Overflow) throw.
Partial<State> denot_run(const ComPtr& c, State s, std::size_t fuel);

/// Big-step natural-semantics evaluator; `fuel` bounds the height of the
/// derivation tree. Bottom = no derivation of height <= fuel exists.
Partial<State> bigstep(const ComPtr& c, State s, std::size_t fuel);

/// The n-th Kleene iterate of the loop functional for `while cond do body`,
/// with the body evaluated at `body_fuel`. denot_run's While case is
/// loop_iterate(cond, body, s, fuel, fuel); exposed so the one-step unfolding
/// law can be stated and tested precisely.
Partial<State> loop_iterate(const BExpPtr& cond, const ComPtr& body, State s, std::size_t body_fuel,
                            std::size_t iterations);

}  // namespace flatfix::imp
