#pragma once

#include <stdexcept>
#include <string>

namespace flatfix {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arithmetic left the 64-bit signed range. A fault, never Bottom: Bottom is
// reserved for failure to terminate.
struct OverflowError : Error {
    using Error::Error;
};

// Two tables with different domains were compared, or a table was queried
// outside its domain.
struct DomainMismatch : Error {
    using Error::Error;
};

// A sequence handed to chain_lub violated the flat chain condition.
struct NotAChain : Error {
    using Error::Error;
};

// A structural invariant was violated at construction or input-parsing time.
struct IllFormed : Error {
    using Error::Error;
};

// The unbounded realization was cut off at its recursion-depth guard.
struct GuardExceeded : Error {
    using Error::Error;
};

struct UndefinedVariable : Error {
    using Error::Error;
};

struct SyntaxError : Error {
    SyntaxError(int line, int column, const std::string& msg)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line(line),
          column(column) {}
    int line;
    int column;
};

// A user-supplied functional graph does not cover the declared finite space.
struct IncompleteGraph : Error {
    using Error::Error;
};

}  // namespace flatfix
