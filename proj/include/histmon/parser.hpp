#pragma once

#include "histmon/ast.hpp"
#include "histmon/history.hpp"
#include "histmon/interp.hpp"

#include <string>

namespace histmon {

// A parsed policy file: event predicate declarations plus one closed formula.
struct PolicyDocument {
    PredTable preds;
    FormulaPtr policy;
};

// Policy file syntax:
//
//   document := { "pred" name [ "(" sorts ")" ] "." }  "policy" formula "."
//
//   formula  := or_f [ "->" formula ]                    (right assoc)
//   or_f     := and_f { "|" and_f }
//   and_f    := unary { "&" unary }
//   unary    := ("!" | "prev" | "once" | "historically") unary | since_f
//   since_f  := primary [ "since" since_f ]              (right assoc)
//   primary  := "true" | "false" | quantifier | "count" var ":" formula "." formula
//             | "(" formula ")" | pred_atom | term rel term
//   quantifier := ("forall" | "exists") "(" vars ")" ":" (pred | guard) "." formula
//
//   term     := aterm { ("+" | "-") aterm }
//   aterm    := factor { ("*" | "/") factor }
//   factor   := int | string | "-" factor | var | fn "(" terms ")" | "(" term ")"
//
// Guards are a restricted sub-grammar: atoms pred(arg, ...) over variables
// and constants, combined with "&", "|", "once", "historically", "prev" and
// "since". "#" starts a line comment. Quantifier bodies extend as far to
// the right as possible.
PolicyDocument parse_policy(const std::string& text, const Registry& reg = Registry::builtins());

// Parses one formula against existing declarations (test and tool helper).
FormulaPtr parse_formula_text(const std::string& text, const PredTable& preds,
                              const Registry& reg = Registry::builtins());

// Canonical text of a policy document; parse_policy inverts it exactly.
std::string format_policy(const PolicyDocument& doc);

// ── History files ────────────────────────────────────────────────────────
//
// JSON object {"sessions": [[event, ...], ...]} where an event is
// {"pred": name, "args": [arg, ...]}. An argument is an integer, a string,
// {"int": "decimal"}, {"rat": "n/d"}, or {"var": name, "sort": sort} for a
// named unknown. Sessions are sets: order and duplicates do not matter.

enum class GroundMode { Require, Allow };

// `preds` null skips signature validation and instead checks that every
// predicate is used at consistent arity and sorts across the file.
POHistory parse_history(const std::string& text, const PredTable* preds, GroundMode mode);

// Parses one session given as a JSON array of events.
POSession parse_session_json(const std::string& text, const PredTable* preds, GroundMode mode);

// Canonical JSON: sorted events, stable field order, smallest representation
// per argument. parse_history inverts it.
std::string write_history(const POHistory& h);

} // namespace histmon
