#pragma once

#include "histmon/ast.hpp"
#include "histmon/history.hpp"
#include "histmon/interp.hpp"

#include <set>

namespace histmon {
namespace guards {

using SolutionSet = std::set<Substitution>;

// Shape checks normally enforced at parse time, repeated here so that
// directly built guards fail loudly: every atom mentions at least one
// variable, and both operands of a disjunction or "since" use the same
// variable set. These restrictions keep solution sets finite.
void validate(const Guard& g);

// All substitutions for the guard's variables that make the guard hold at
// session i. Solutions bind every guard variable, only to values occurring
// in the history, and the set is finite.
SolutionSet solutions(const History& h, int i, const Guard& g);

// Judges a guarded quantifier (ForallG/ExistsG) at session i by enumerating
// guard solutions and evaluating the body under each.
bool eval_guarded(const History& h, int i, const FormulaPtr& quantifier, const Registry& reg);

} // namespace guards
} // namespace histmon
