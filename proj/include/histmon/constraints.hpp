#pragma once

#include "histmon/errors.hpp"
#include "histmon/subst.hpp"
#include "histmon/value.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>

namespace histmon {
namespace constraints {

// Linear integer combination: sum of coeff * var plus a constant. The
// coefficient map never stores zeros.
struct Lin {
    std::map<std::string, mpz_class> coeff;
    mpz_class k;

    bool ground() const { return coeff.empty(); }
    Lin& add(const Lin& o, const mpz_class& scale = 1);
    Lin negated() const;
    std::string to_string() const;
};

Lin lin_const(mpz_class k);
Lin lin_var(const std::string& name, mpz_class coeff = 1);

enum class CKind { Top, Bot, IntAtom, SymAtom, And, Or, Not };
enum class IntRel { Eq, Le, Ge };

// Operand of an equality atom over a non-Int sort: a variable or a value.
using SymOperand = std::variant<std::string, Value>;

struct C;
using CPtr = std::shared_ptr<const C>;

// Constraint formula: boolean combinations of linear integer atoms
// (lin = 0, lin <= 0, lin >= 0) and equalities over Rat/Str unknowns.
struct C {
    CKind kind;

    // IntAtom: lin `rel` 0
    Lin lin;
    IntRel rel{};

    // SymAtom: a = b at a non-Int sort
    Sort sym_sort{};
    SymOperand a, b;

    CPtr left, right;
};

// Constructors fold ground atoms and trivial connectives: And/Or absorb
// Top/Bot and Not collapses double negation, so compiled output stays small.
CPtr c_top();
CPtr c_bot();
CPtr c_int(Lin lin, IntRel rel);
CPtr c_sym_eq(SymOperand a, SymOperand b, Sort sort);
CPtr c_and(CPtr l, CPtr r);
CPtr c_or(CPtr l, CPtr r);
CPtr c_not(CPtr x);

std::map<std::string, Sort> variables(const CPtr& c);
size_t node_count(const CPtr& c);

// ── Satisfiability ───────────────────────────────────────────────────────

struct Budget {
    uint64_t branches = 200000;     // disjunctive branches examined
    uint64_t derived = 500000;      // constraints derived during elimination
    uint64_t search_nodes = 500000; // assignment search steps
};

enum class SatVerdict { Sat, Unsat, Unknown };

struct SatResult {
    SatVerdict verdict = SatVerdict::Unknown;
    std::optional<Substitution> model; // total over variables(c); verified
    std::string reason;                // set when verdict == Unknown
};

// Decides satisfiability over the integers (Int unknowns) and infinite
// uninterpreted domains (Rat/Str unknowns, equality only). Branches are
// enumerated in deterministic order; integer feasibility uses projection
// with gcd tightening plus a bounded assignment search. Exceeding the
// budget yields Unknown, never a wrong verdict. Sat results carry a model
// that has been checked by direct evaluation.
SatResult satisfiable(const CPtr& c, const Budget& budget = {});

// Truth of a constraint under a total assignment; missing bindings raise.
bool evaluate(const CPtr& c, const Substitution& model);

// Readable single-line rendering.
std::string to_text(const CPtr& c);

// SMT-LIB 2 script: QF_LIA, or QF_UF-style declarations when Rat/Str
// unknowns occur (those sorts become uninterpreted sorts with pairwise
// distinct declared constants). Deterministic output.
std::string to_smtlib(const CPtr& c);

} // namespace constraints
} // namespace histmon
