#pragma once

#include "histmon/ast.hpp"
#include "histmon/history.hpp"
#include "histmon/interp.hpp"

#include <vector>

namespace histmon {
namespace dp {

struct Stats {
    size_t nodes = 0;   // deduplicated subformulas
    size_t columns = 0; // table columns across all subformulas
    size_t cells = 0;   // columns * |h|
};

// Judges a closed core-fragment formula at the final session by filling
// per-subformula truth tables bottom-up: one row per session, one column
// per requested variable binding. Bindings are only created for tuples that
// actually occur in the history, so for a fixed formula the work is
// polynomial in the history size. Count and guarded quantifiers raise
// CapabilityError; an empty history raises EmptyHistoryError.
bool check_dp(const History& h, const FormulaPtr& f, const Registry& reg, Stats* stats = nullptr);

// Deduplicated subformulas, children before parents (exposed for tests).
std::vector<FormulaPtr> closure(const FormulaPtr& f);

} // namespace dp
} // namespace histmon
