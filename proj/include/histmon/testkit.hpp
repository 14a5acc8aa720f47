#pragma once

#include "histmon/ast.hpp"
#include "histmon/constraints.hpp"
#include "histmon/history.hpp"
#include "histmon/interp.hpp"

#include <random>
#include <set>
#include <string>
#include <vector>

// Test-support code: reference implementations that are deliberately naive
// and structurally unrelated to the engines they check, plus deterministic
// generators for randomized cross-checking.

namespace histmon {
namespace testkit {

// ── Reference semantics ──────────────────────────────────────────────────

// Direct recursion on the defining clauses with eager substitution into
// the formula tree. No memoization, no environments, no sharing; the
// temporal operator is decided by explicit search over past sessions.
bool oracle_eval(const History& h, int i, const FormulaPtr& f,
                 const Registry& reg = Registry::builtins());

// Guard solutions by generate-and-test: enumerate every candidate binding
// built from the history's constants and keep those the guard admits.
std::set<Substitution> oracle_guard_solutions(const History& h, int i, const GuardPtr& g);

// Completion search by enumeration: Int unknowns range over [lo, hi],
// Rat/Str unknowns over the constants of the history and formula plus
// enough fresh values to keep distinct unknowns distinguishable. True iff
// some completion satisfies the formula at the last session.
bool psat_bounded(const POHistory& h, const FormulaPtr& f, long lo, long hi,
                  const Registry& reg = Registry::builtins());

// ── Quantified boolean formulas ──────────────────────────────────────────

struct QbfSpec {
    int nvars = 0;
    std::vector<bool> forall;              // per variable 1..nvars, outermost first
    std::vector<std::vector<int>> clauses; // DIMACS literals, never 0
};

// QDIMACS subset: optional comments, "p cnf <vars> <clauses>", one or more
// a/e prefix lines, clause lines. Every variable must be quantified.
QbfSpec parse_qdimacs(const std::string& text);

// Truth by brute-force expansion of the prefix (at most 16 variables).
bool qbf_truth(const QbfSpec& spec);

enum class QbfShape {
    SingleSession, // one session carrying both candidate values per variable
    TraceLike,     // two sessions per variable; temporal operators do the scoping
};

struct QbfEncoding {
    PredTable preds;
    FormulaPtr policy;
    History history;
};

// Encodes a closed QBF so that the policy holds on the history exactly
// when the QBF is true.
QbfEncoding encode_qbf(const QbfSpec& spec, QbfShape shape);

// ── Deterministic random instances ───────────────────────────────────────

class Rng {
public:
    explicit Rng(uint64_t seed) : g_(seed) {}

    int range(int lo, int hi); // inclusive bounds
    bool chance(int percent);

    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<size_t>(range(0, static_cast<int>(v.size()) - 1))];
    }

private:
    std::mt19937_64 g_;
};

// Fixed signature shared by the generators: p(Int), q(Int, Int), r(Str)
// and the 0-ary marker b. Values are drawn from small pools so that
// generated formulas and histories talk about the same constants.
PredTable test_signature();
Value random_value(Rng& rng, Sort s);

History random_history(Rng& rng, int sessions, int max_events_per_session);

// Closed random formula of bounded depth over the test signature. Terms
// stay within linear arithmetic and avoid division.
FormulaPtr random_formula(Rng& rng, int depth, bool allow_count, bool allow_guards);

// Well-formed random guard binding exactly the given variables, which must
// be all-Int (at most two) or one Str variable.
GuardPtr random_guard(Rng& rng, const std::vector<TypedVar>& binders, int depth);
std::vector<TypedVar> random_binders(Rng& rng);

// Replaces some ground arguments of a lifted history with named unknowns;
// names are reused across positions so repeated unknowns occur.
POHistory random_po_instance(Rng& rng, const History& h, int percent_unknown);

// Random constraint over at most nvars Int variables with atom shapes
// k*x rel c (1 <= k <= 3, |c| <= 8) and x rel y. Any satisfiable formula
// of this shape has a solution with every variable in [-12, 12]: values
// can be remapped order-isomorphically around the thresholds c/k, which
// all lie in [-8, 8], without changing any atom.
constraints::CPtr random_constraint(Rng& rng, int nvars, int depth);

// Exhaustive search over the box [lo, hi]^n; the constraint must be
// Int-only.
bool brute_force_sat(const constraints::CPtr& c, long lo, long hi);

} // namespace testkit
} // namespace histmon
