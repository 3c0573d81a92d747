#include "flatfix/imp.hpp"

#include <cctype>
#include <sstream>
#include <utility>

namespace flatfix::imp {

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

}  // namespace

bool valid_identifier(std::string_view name) {
    if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) return false;
    for (char c : name) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return true;
}

// --- factories ---------------------------------------------------------------

AExpPtr AExp::lit(Int v) { return std::make_shared<AExp>(AExp{Kind::IntLit, v, {}, nullptr, nullptr}); }

AExpPtr AExp::var(std::string name) {
    if (!valid_identifier(name)) throw IllFormed("invalid identifier: '" + name + "'");
    return std::make_shared<AExp>(AExp{Kind::Var, 0, std::move(name), nullptr, nullptr});
}

AExpPtr AExp::plus(AExpPtr l, AExpPtr r) {
    return std::make_shared<AExp>(AExp{Kind::Plus, 0, {}, std::move(l), std::move(r)});
}

AExpPtr AExp::minus(AExpPtr l, AExpPtr r) {
    return std::make_shared<AExp>(AExp{Kind::Minus, 0, {}, std::move(l), std::move(r)});
}

AExpPtr AExp::times(AExpPtr l, AExpPtr r) {
    return std::make_shared<AExp>(AExp{Kind::Times, 0, {}, std::move(l), std::move(r)});
}

BExpPtr BExp::lit(bool v) { return std::make_shared<BExp>(BExp{Kind::BoolLit, v, nullptr, nullptr, nullptr, nullptr}); }

BExpPtr BExp::eq(AExpPtr l, AExpPtr r) {
    return std::make_shared<BExp>(BExp{Kind::Eq, false, std::move(l), std::move(r), nullptr, nullptr});
}

BExpPtr BExp::le(AExpPtr l, AExpPtr r) {
    return std::make_shared<BExp>(BExp{Kind::Le, false, std::move(l), std::move(r), nullptr, nullptr});
}

BExpPtr BExp::negation(BExpPtr b) {
    return std::make_shared<BExp>(BExp{Kind::Not, false, nullptr, nullptr, std::move(b), nullptr});
}

BExpPtr BExp::conj(BExpPtr l, BExpPtr r) {
    return std::make_shared<BExp>(BExp{Kind::And, false, nullptr, nullptr, std::move(l), std::move(r)});
}

ComPtr Com::skip() { return std::make_shared<Com>(Com{Kind::Skip, {}, nullptr, nullptr, nullptr, nullptr}); }

ComPtr Com::assign(std::string name, AExpPtr e) {
    if (!valid_identifier(name)) throw IllFormed("invalid identifier: '" + name + "'");
    return std::make_shared<Com>(Com{Kind::Assign, std::move(name), std::move(e), nullptr, nullptr, nullptr});
}

ComPtr Com::seq(ComPtr first, ComPtr second) {
    return std::make_shared<Com>(Com{Kind::Seq, {}, nullptr, nullptr, std::move(first), std::move(second)});
}

ComPtr Com::if_then_else(BExpPtr cond, ComPtr then_branch, ComPtr else_branch) {
    return std::make_shared<Com>(
        Com{Kind::If, {}, nullptr, std::move(cond), std::move(then_branch), std::move(else_branch)});
}

ComPtr Com::while_do(BExpPtr cond, ComPtr body) {
    return std::make_shared<Com>(Com{Kind::While, {}, nullptr, std::move(cond), std::move(body), nullptr});
}

// --- structural equality -----------------------------------------------------

bool aexp_equal(const AExpPtr& a, const AExpPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case AExp::Kind::IntLit: return a->value == b->value;
        case AExp::Kind::Var: return a->name == b->name;
        default: return aexp_equal(a->left, b->left) && aexp_equal(a->right, b->right);
    }
}

bool bexp_equal(const BExpPtr& a, const BExpPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case BExp::Kind::BoolLit: return a->bvalue == b->bvalue;
        case BExp::Kind::Eq:
        case BExp::Kind::Le: return aexp_equal(a->aleft, b->aleft) && aexp_equal(a->aright, b->aright);
        case BExp::Kind::Not: return bexp_equal(a->bleft, b->bleft);
        case BExp::Kind::And: return bexp_equal(a->bleft, b->bleft) && bexp_equal(a->bright, b->bright);
    }
    return false;
}

bool com_equal(const ComPtr& a, const ComPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Com::Kind::Skip: return true;
        case Com::Kind::Assign: return a->name == b->name && aexp_equal(a->aexp, b->aexp);
        case Com::Kind::Seq: return com_equal(a->first, b->first) && com_equal(a->second, b->second);
        case Com::Kind::If:
            return bexp_equal(a->bexp, b->bexp) && com_equal(a->first, b->first) &&
                   com_equal(a->second, b->second);
        case Com::Kind::While: return bexp_equal(a->bexp, b->bexp) && com_equal(a->first, b->first);
    }
    return false;
}

// --- store --------------------------------------------------------------------

Int State::get(const std::string& name) const {
    auto it = vars_.find(name);
    if (it == vars_.end()) throw UndefinedVariable("undefined variable '" + name + "'");
    return it->second;
}

void State::set(const std::string& name, Int v) {
    if (!valid_identifier(name)) throw IllFormed("invalid identifier: '" + name + "'");
    vars_[name] = v;
}

// --- expression semantics ------------------------------------------------------

Int aeval(const AExpPtr& e, const State& s) {
    if (!e) throw IllFormed("aeval: null expression");
    switch (e->kind) {
        case AExp::Kind::IntLit: return e->value;
        case AExp::Kind::Var: return s.get(e->name);
        case AExp::Kind::Plus: return add_ovf(aeval(e->left, s), aeval(e->right, s));
        case AExp::Kind::Minus: return sub_ovf(aeval(e->left, s), aeval(e->right, s));
        case AExp::Kind::Times: return mul_ovf(aeval(e->left, s), aeval(e->right, s));
    }
    throw IllFormed("aeval: unknown node kind");
}

bool beval(const BExpPtr& b, const State& s) {
    if (!b) throw IllFormed("beval: null expression");
    switch (b->kind) {
        case BExp::Kind::BoolLit: return b->bvalue;
        case BExp::Kind::Eq: return aeval(b->aleft, s) == aeval(b->aright, s);
        case BExp::Kind::Le: return aeval(b->aleft, s) <= aeval(b->aright, s);
        case BExp::Kind::Not: return !beval(b->bleft, s);
        case BExp::Kind::And: {
            // Strict in both operands: faults surface regardless of the left value.
            bool l = beval(b->bleft, s);
            bool r = beval(b->bright, s);
            return l && r;
        }
    }
    throw IllFormed("beval: unknown node kind");
}

// --- pretty-printer -------------------------------------------------------------

namespace {

// precedence: 1 = additive chain, 2 = multiplicative chain, 3 = atom
void print_aexp(std::ostringstream& os, const AExpPtr& e, int min_prec) {
    switch (e->kind) {
        case AExp::Kind::IntLit:
            os << e->value;
            return;
        case AExp::Kind::Var:
            os << e->name;
            return;
        case AExp::Kind::Plus:
        case AExp::Kind::Minus: {
            const bool parens = min_prec > 1;
            if (parens) os << "(";
            print_aexp(os, e->left, 1);
            os << (e->kind == AExp::Kind::Plus ? " + " : " - ");
            print_aexp(os, e->right, 2);  // additive ops are left-associative
            if (parens) os << ")";
            return;
        }
        case AExp::Kind::Times: {
            const bool parens = min_prec > 2;
            if (parens) os << "(";
            print_aexp(os, e->left, 2);
            os << " * ";
            print_aexp(os, e->right, 3);
            if (parens) os << ")";
            return;
        }
    }
}

void print_bexp(std::ostringstream& os, const BExpPtr& b, bool atom_position) {
    switch (b->kind) {
        case BExp::Kind::BoolLit:
            os << (b->bvalue ? "true" : "false");
            return;
        case BExp::Kind::Eq:
        case BExp::Kind::Le:
            print_aexp(os, b->aleft, 1);
            os << (b->kind == BExp::Kind::Eq ? " = " : " <= ");
            print_aexp(os, b->aright, 1);
            return;
        case BExp::Kind::Not:
            os << "not (";
            print_bexp(os, b->bleft, false);
            os << ")";
            return;
        case BExp::Kind::And: {
            if (atom_position) os << "(";
            print_bexp(os, b->bleft, false);
            os << " and ";
            print_bexp(os, b->bright, true);  // 'and' chains are left-associative
            if (atom_position) os << ")";
            return;
        }
    }
}

void print_com(std::ostringstream& os, const ComPtr& c) {
    switch (c->kind) {
        case Com::Kind::Skip:
            os << "skip";
            return;
        case Com::Kind::Assign:
            os << c->name << " := ";
            print_aexp(os, c->aexp, 1);
            return;
        case Com::Kind::Seq:
            print_com(os, c->first);
            os << "; ";
            print_com(os, c->second);
            return;
        case Com::Kind::If:
            os << "if ";
            print_bexp(os, c->bexp, false);
            os << " then ";
            print_com(os, c->first);
            os << " else ";
            print_com(os, c->second);
            os << " end";
            return;
        case Com::Kind::While:
            os << "while ";
            print_bexp(os, c->bexp, false);
            os << " do ";
            print_com(os, c->first);
            os << " done";
            return;
    }
}

}  // namespace

std::string pretty(const AExpPtr& e) {
    std::ostringstream os;
    print_aexp(os, e, 1);
    return os.str();
}

std::string pretty(const BExpPtr& b) {
    std::ostringstream os;
    print_bexp(os, b, false);
    return os.str();
}

std::string pretty(const ComPtr& c) {
    std::ostringstream os;
    print_com(os, c);
    return os.str();
}

// --- denotational interpreter ----------------------------------------------------

Partial<State> loop_iterate(const BExpPtr& cond, const ComPtr& body, State s, std::size_t body_fuel,
                            std::size_t iterations) {
    // The n-th iterate of W(w)(s) = if beval(cond,s) then w(run body) else s,
    // starting from W^0 = Bottom. Written as a loop: each pass peels one W.
    for (std::size_t n = iterations; n > 0; --n) {
        if (!beval(cond, s)) return Partial<State>::value(std::move(s));
        Partial<State> after = denot_run(body, std::move(s), body_fuel);
        if (after.is_bottom()) return after;
        s = after.get();
    }
    return Partial<State>::bottom();
}

Partial<State> denot_run(const ComPtr& c, State s, std::size_t fuel) {
    if (!c) throw IllFormed("denot_run: null command");
    switch (c->kind) {
        case Com::Kind::Skip:
            return Partial<State>::value(std::move(s));
        case Com::Kind::Assign: {
            Int v = aeval(c->aexp, s);
            s.set(c->name, v);
            return Partial<State>::value(std::move(s));
        }
        case Com::Kind::Seq: {
            Partial<State> mid = denot_run(c->first, std::move(s), fuel);
            if (mid.is_bottom()) return mid;  // strict composition
            return denot_run(c->second, mid.get(), fuel);
        }
        case Com::Kind::If:
            return beval(c->bexp, s) ? denot_run(c->first, std::move(s), fuel)
                                     : denot_run(c->second, std::move(s), fuel);
        case Com::Kind::While:
            return loop_iterate(c->bexp, c->first, std::move(s), fuel, fuel);
    }
    throw IllFormed("denot_run: unknown node kind");
}

// --- natural semantics -------------------------------------------------------------

Partial<State> bigstep(const ComPtr& c, State s, std::size_t fuel) {
    if (!c) throw IllFormed("bigstep: null command");
    // Rule continuations (Seq second premise, If branch, While restart) are
    // tail positions; looping on them keeps native recursion bounded by the
    // program's nesting, not by fuel. The recurrence is unchanged.
    const Com* cur = c.get();
    for (;;) {
        if (fuel == 0) return Partial<State>::bottom();  // no derivation of height 0
        switch (cur->kind) {
            case Com::Kind::Skip:
                return Partial<State>::value(std::move(s));
            case Com::Kind::Assign: {
                Int v = aeval(cur->aexp, s);
                s.set(cur->name, v);
                return Partial<State>::value(std::move(s));
            }
            case Com::Kind::Seq: {
                Partial<State> mid = bigstep(cur->first, std::move(s), fuel - 1);
                if (mid.is_bottom()) return mid;
                s = mid.get();
                cur = cur->second.get();
                --fuel;
                continue;
            }
            case Com::Kind::If:
                cur = beval(cur->bexp, s) ? cur->first.get() : cur->second.get();
                --fuel;
                continue;
            case Com::Kind::While: {
                if (!beval(cur->bexp, s)) return Partial<State>::value(std::move(s));
                Partial<State> mid = bigstep(cur->first, std::move(s), fuel - 1);
                if (mid.is_bottom()) return mid;
                s = mid.get();
                --fuel;
                continue;
            }
            default:
                throw IllFormed("bigstep: unknown node kind");
        }
    }
}

}  // namespace flatfix::imp
