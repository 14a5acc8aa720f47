#pragma once

#include "histmon/errors.hpp"
#include "histmon/subst.hpp"
#include "histmon/value.hpp"

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace histmon {

// ── Terms ────────────────────────────────────────────────────────────────

struct Term;
using TermPtr = std::shared_ptr<const Term>;

enum class TermKind { Var, Const, App };

struct TypedVar {
    std::string name;
    Sort sort;
    bool operator==(const TypedVar& o) const { return name == o.name && sort == o.sort; }
};

struct Term {
    TermKind kind;
    Pos pos{};

    // Var
    std::string var;
    Sort var_sort{};

    // Const
    std::optional<Value> value;

    // App: rigid interpreted function, result sort resolved when built
    std::string fn;
    std::vector<TermPtr> args;
    Sort result_sort{};

    Sort sort() const {
        switch (kind) {
        case TermKind::Var: return var_sort;
        case TermKind::Const: return value->sort();
        case TermKind::App: return result_sort;
        }
        return Sort::Int;
    }
};

TermPtr t_var(std::string name, Sort sort, Pos pos = {});
TermPtr t_const(Value v, Pos pos = {});
TermPtr t_app(std::string fn, std::vector<TermPtr> args, Sort result_sort, Pos pos = {});

// ── Guards ───────────────────────────────────────────────────────────────
//
// Guard expressions restrict guarded quantifiers to bindings that occur in
// the history. Atoms take only variables and constants; negation and
// interpreted relations are excluded so that the solution set stays finite.

struct Guard;
using GuardPtr = std::shared_ptr<const Guard>;

enum class GuardKind { Atom, Conj, Disj, Once, Hist, SinceG, PrevG };

using GuardArg = std::variant<TypedVar, Value>;

struct Guard {
    GuardKind kind;
    Pos pos{};

    // Atom
    std::string pred;
    std::vector<GuardArg> args;

    // Conj/Disj/SinceG: left+right; Once/Hist/PrevG: left only
    GuardPtr left, right;
};

GuardPtr g_atom(std::string pred, std::vector<GuardArg> args, Pos pos = {});
GuardPtr g_conj(GuardPtr a, GuardPtr b, Pos pos = {});
GuardPtr g_disj(GuardPtr a, GuardPtr b, Pos pos = {});
GuardPtr g_once(GuardPtr a, Pos pos = {});
GuardPtr g_hist(GuardPtr a, Pos pos = {});
GuardPtr g_since(GuardPtr a, GuardPtr b, Pos pos = {});
GuardPtr g_prev(GuardPtr a, Pos pos = {});

// Variables of a guard, keyed by name (sorts taken from first occurrence).
std::map<std::string, Sort> guard_vars(const Guard& g);

// ── Formulas ─────────────────────────────────────────────────────────────
//
// Core connectives only; disjunction, implication, "once", "historically"
// and existential quantifiers are built as abbreviations on top of these.

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

enum class FormulaKind {
    True,    // constant truth
    Pred,    // event lookup in the current session
    Rel,     // rigid interpreted relation on terms
    Not,
    And,
    Prev,    // one session earlier; false at the first session
    Since,   // right held at some earlier-or-current session, left ever since
    ForallP, // all bindings of one event predicate in the current session
    Count,   // bind a variable to how many sessions so far satisfy a formula
    ForallG, // all guard solutions satisfy the body
    ExistsG, // some guard solution satisfies the body
};

struct Formula {
    FormulaKind kind;
    Pos pos{};

    // Pred/Rel
    std::string name;
    std::vector<TermPtr> terms;

    // Children: Not/Prev use left; And/Since use left+right.
    // Count: left counts, right is the body. ForallP/ForallG/ExistsG: left is the body.
    FormulaPtr left, right;

    // ForallP/ForallG/ExistsG: bound variables. Count: single Int variable.
    std::vector<TypedVar> vars;

    // ForallG/ExistsG
    GuardPtr guard;
};

FormulaPtr f_true();
FormulaPtr f_pred(std::string name, std::vector<TermPtr> terms, Pos pos = {});
FormulaPtr f_rel(std::string name, std::vector<TermPtr> terms, Pos pos = {});
FormulaPtr f_not(FormulaPtr a, Pos pos = {});
FormulaPtr f_and(FormulaPtr a, FormulaPtr b, Pos pos = {});
FormulaPtr f_prev(FormulaPtr a, Pos pos = {});
FormulaPtr f_since(FormulaPtr a, FormulaPtr b, Pos pos = {});
FormulaPtr f_forall_p(std::vector<TypedVar> vars, std::string pred, FormulaPtr body, Pos pos = {});
FormulaPtr f_count(TypedVar var, FormulaPtr counted, FormulaPtr body, Pos pos = {});
FormulaPtr f_forall_g(std::vector<TypedVar> vars, GuardPtr guard, FormulaPtr body, Pos pos = {});
FormulaPtr f_exists_g(std::vector<TypedVar> vars, GuardPtr guard, FormulaPtr body, Pos pos = {});

// Abbreviations.
FormulaPtr f_false();
FormulaPtr f_or(FormulaPtr a, FormulaPtr b, Pos pos = {});
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b, Pos pos = {});
FormulaPtr f_once(FormulaPtr a, Pos pos = {});
FormulaPtr f_historically(FormulaPtr a, Pos pos = {});
FormulaPtr f_exists_p(std::vector<TypedVar> vars, std::string pred, FormulaPtr body, Pos pos = {});

// ── Declarations ─────────────────────────────────────────────────────────

struct PredDecl {
    std::string name;
    std::vector<Sort> arg_sorts;
};

using PredTable = std::vector<PredDecl>;

const PredDecl* find_pred(const PredTable& table, const std::string& name);

// ── Operations ───────────────────────────────────────────────────────────

std::map<std::string, Sort> free_vars(const Term& t);
std::map<std::string, Sort> free_vars(const Formula& f);
bool is_closed(const Formula& f);

// Capability probes for engines that handle only a fragment.
bool uses_count(const Formula& f);
bool uses_guards(const Formula& f);

// Replaces free variables by ground values; bound occurrences are untouched
// and bindings whose sort disagrees with the variable raise SortError.
TermPtr apply_substitution(const TermPtr& t, const Substitution& s);
FormulaPtr apply_substitution(const FormulaPtr& f, const Substitution& s);

// Canonical s-expression, stable across equal structures; usable as a map key.
std::string structure_key(const Term& t);
std::string structure_key(const Formula& f);
std::string structure_key(const Guard& g);

} // namespace histmon
