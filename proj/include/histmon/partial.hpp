#pragma once

#include "histmon/ast.hpp"
#include "histmon/constraints.hpp"
#include "histmon/history.hpp"
#include "histmon/interp.hpp"

namespace histmon {
namespace partial {

struct Options {
    size_t node_budget = 2000000; // compilation steps before BudgetError
    constraints::Budget solver{};
};

// Compiles truth of a closed formula at session i of a partially observed
// history into a constraint over the history's unknowns: a well-sorted
// total substitution satisfies the constraint exactly when the substituted
// ground history satisfies the formula at i. The count quantifier and
// guarded quantifiers are rejected with CapabilityError, as are terms that
// leave linear integer arithmetic plus Rat/Str equality (products of two
// unknown-bearing terms, functions applied to unknowns, rational order
// over unknowns).
constraints::CPtr compile(const POHistory& h, int i, const FormulaPtr& f,
                          const Registry& reg = Registry::builtins(),
                          const Options& opts = {});

struct CheckResult {
    bool holds = false;

    // psat: a satisfying completion when holds. adhere: a violating
    // completion when not holds. Total over the history's unknowns and
    // checked against ground evaluation before being returned.
    std::optional<Substitution> witness;

    // The constraint whose satisfiability was decided (for adherence this
    // is the compiled negation).
    constraints::CPtr constraint;
};

// Some completion of the history satisfies the formula at the last session.
CheckResult psat(const POHistory& h, const FormulaPtr& f,
                 const Registry& reg = Registry::builtins(), const Options& opts = {});

// Every completion of the history satisfies the formula at the last
// session; decided as the negation having no satisfying completion.
CheckResult adhere(const POHistory& h, const FormulaPtr& f,
                   const Registry& reg = Registry::builtins(), const Options& opts = {});

} // namespace partial
} // namespace histmon
