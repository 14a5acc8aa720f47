#pragma once

#include "histmon/ast.hpp"
#include "histmon/history.hpp"
#include "histmon/interp.hpp"

#include <memory>
#include <string>
#include <vector>

namespace histmon {
namespace eval {

// One step of an evaluation explanation. Children are the subformula
// verdicts this verdict was derived from; with short-circuiting enabled
// (the default) only the deciding children appear.
struct TraceNode {
    std::string rule;    // which clause fired, e.g. "and", "since-here", "prev-first"
    std::string formula; // concrete syntax of the subformula, after binding
    int index = 0;       // session the subformula was judged at
    bool value = false;
    std::vector<std::shared_ptr<const TraceNode>> children;
};

using TracePtr = std::shared_ptr<const TraceNode>;

struct Options {
    bool build_trace = false;
    bool full_trace = false; // disable short-circuiting so every child is explained
};

struct Verdict {
    bool value = false;
    TracePtr trace; // null unless build_trace was set
};

// Judges a closed formula at session i (1-based, 1 <= i <= |h|). Evaluation
// is memoized per (subformula, session, binding), so shared subformulas and
// the linear unfolding of "since" are each computed once.
Verdict eval_at(const History& h, int i, const FormulaPtr& f, const Registry& reg,
                const Options& opts = {});

// Judges at the final session. Raises EmptyHistoryError when |h| = 0.
Verdict check(const History& h, const FormulaPtr& f, const Registry& reg, const Options& opts = {});

// Indented text rendering of an explanation tree.
std::string render_trace(const TraceNode& t);

} // namespace eval
} // namespace histmon
