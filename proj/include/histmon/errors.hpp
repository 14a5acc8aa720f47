#pragma once

#include <stdexcept>
#include <string>

namespace histmon {

// Source position inside a policy file (1-based; 0 means "unknown").
struct Pos {
    int line = 0;
    int col  = 0;
};

inline std::string pos_prefix(Pos p) {
    if (p.line <= 0) return "";
    return "line " + std::to_string(p.line) + ":" + std::to_string(p.col) + ": ";
}

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Lexical, syntactic, or declaration problems in policy/history inputs.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, Pos p = {}) : Error(pos_prefix(p) + msg), pos(p) {}
    Pos pos;
};

// Arity or sort mismatches, detected at parse time or when building ASTs directly.
class SortError : public Error {
public:
    SortError(const std::string& msg, Pos p = {}) : Error(pos_prefix(p) + msg), pos(p) {}
    Pos pos;
};

// Term evaluation failed (division by zero, unbound variable, unknown symbol).
// Aborts the enclosing check with a diagnostic.
class EvalError : public Error {
public:
    EvalError(const std::string& msg, Pos p = {}) : Error(pos_prefix(p) + msg), pos(p) {}
    Pos pos;
};

// The selected engine does not support a construct used by the policy.
class CapabilityError : public Error {
public:
    using Error::Error;
};

// A configured resource cap was exceeded; the answer is "unknown", never sat/unsat.
class BudgetError : public Error {
public:
    using Error::Error;
};

// A check was requested on a history with no sessions.
class EmptyHistoryError : public Error {
public:
    EmptyHistoryError() : Error("history has no sessions") {}
};

} // namespace histmon
