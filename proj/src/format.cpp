#include "histmon/format.hpp"

namespace histmon {

// Surface precedence levels, low to high. A subterm is parenthesized when
// its level is below what its context requires. Quantifiers and count sit
// at level 0: parenthesized everywhere except where a full formula is
// expected (top level, quantifier bodies, inside parentheses).
namespace {

constexpr int kImplies = 1;
constexpr int kOr = 2;
constexpr int kAnd = 3;
constexpr int kUnary = 4;
constexpr int kSince = 5;
constexpr int kPrimary = 6;

constexpr int kAdd = 1;
constexpr int kMul = 2;
constexpr int kTermPrimary = 3;

std::string wrap(const std::string& s, int level, int min_level) {
    if (level < min_level) return "(" + s + ")";
    return s;
}

std::string term_text(const Term& t, int min_level);

std::string term_args(const std::vector<TermPtr>& args) {
    std::string out = "(";
    for (size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += term_text(*args[i], 0);
    }
    return out + ")";
}

std::string term_text(const Term& t, int min_level) {
    switch (t.kind) {
    case TermKind::Var: return t.var;
    case TermKind::Const: return t.value->to_string();
    case TermKind::App: {
        if (t.args.size() == 2 && (t.fn == "+" || t.fn == "-"))
            return wrap(term_text(*t.args[0], kAdd) + " " + t.fn + " " + term_text(*t.args[1], kMul),
                        kAdd, min_level);
        if (t.args.size() == 2 && (t.fn == "*" || t.fn == "/"))
            return wrap(term_text(*t.args[0], kMul) + " " + t.fn + " " +
                            term_text(*t.args[1], kTermPrimary),
                        kMul, min_level);
        return t.fn + term_args(t.args);
    }
    }
    return "?";
}

constexpr int kGOr = 1;
constexpr int kGAnd = 2;
constexpr int kGUnary = 3;
constexpr int kGSince = 4;
constexpr int kGPrimary = 5;

std::string guard_text(const Guard& g, int min_level) {
    switch (g.kind) {
    case GuardKind::Atom: {
        std::string out = g.pred + "(";
        for (size_t i = 0; i < g.args.size(); ++i) {
            if (i) out += ", ";
            if (const auto* v = std::get_if<TypedVar>(&g.args[i]))
                out += v->name;
            else
                out += std::get<Value>(g.args[i]).to_string();
        }
        return out + ")";
    }
    case GuardKind::Conj:
        return wrap(guard_text(*g.left, kGAnd) + " & " + guard_text(*g.right, kGUnary), kGAnd, min_level);
    case GuardKind::Disj:
        return wrap(guard_text(*g.left, kGOr) + " | " + guard_text(*g.right, kGAnd), kGOr, min_level);
    case GuardKind::Once: return wrap("once " + guard_text(*g.left, kGUnary), kGUnary, min_level);
    case GuardKind::Hist: return wrap("historically " + guard_text(*g.left, kGUnary), kGUnary, min_level);
    case GuardKind::PrevG: return wrap("prev " + guard_text(*g.left, kGUnary), kGUnary, min_level);
    case GuardKind::SinceG:
        return wrap(guard_text(*g.left, kGPrimary) + " since " + guard_text(*g.right, kGSince), kGSince,
                    min_level);
    }
    return "?";
}

std::string var_list(const std::vector<TypedVar>& vars) {
    std::string out = "(";
    for (size_t i = 0; i < vars.size(); ++i) {
        if (i) out += ", ";
        out += vars[i].name;
    }
    return out + ")";
}

std::string formula_text(const Formula& f, int min_level);

// Abbreviation patterns, tried in a fixed order before the plain rendering
// of a negation. Each is the exact image of one parser desugaring.
const Formula* match_not_true(const Formula& f) {
    return f.left->kind == FormulaKind::True ? f.left.get() : nullptr;
}

std::string formula_text(const Formula& f, int min_level) {
    switch (f.kind) {
    case FormulaKind::True: return "true";
    case FormulaKind::Pred: {
        if (f.terms.empty()) return f.name;
        return f.name + term_args(f.terms);
    }
    case FormulaKind::Rel: {
        if (f.terms.size() == 2)
            return term_text(*f.terms[0], 0) + " " + f.name + " " + term_text(*f.terms[1], 0);
        return f.name + term_args(f.terms);
    }
    case FormulaKind::Not: {
        const Formula& c = *f.left;
        if (match_not_true(f)) return "false";
        // historically a  ==  ! (true since ! a)
        if (c.kind == FormulaKind::Since && c.left->kind == FormulaKind::True &&
            c.right->kind == FormulaKind::Not)
            return wrap("historically " + formula_text(*c.right->left, kUnary), kUnary, min_level);
        // exists (x):p. a  ==  ! forall (x):p. ! a
        if (c.kind == FormulaKind::ForallP && c.left->kind == FormulaKind::Not)
            return wrap("exists " + var_list(c.vars) + ":" + c.name + ". " +
                            formula_text(*c.left->left, 0),
                        0, min_level);
        // a | b  ==  ! (! a & ! b)
        if (c.kind == FormulaKind::And && c.left->kind == FormulaKind::Not &&
            c.right->kind == FormulaKind::Not)
            return wrap(formula_text(*c.left->left, kOr) + " | " + formula_text(*c.right->left, kAnd),
                        kOr, min_level);
        // a -> b  ==  ! (a & ! b)
        if (c.kind == FormulaKind::And && c.right->kind == FormulaKind::Not)
            return wrap(formula_text(*c.left, kOr) + " -> " + formula_text(*c.right->left, kImplies),
                        kImplies, min_level);
        return wrap("! " + formula_text(c, kUnary), kUnary, min_level);
    }
    case FormulaKind::And:
        return wrap(formula_text(*f.left, kAnd) + " & " + formula_text(*f.right, kUnary), kAnd,
                    min_level);
    case FormulaKind::Prev: return wrap("prev " + formula_text(*f.left, kUnary), kUnary, min_level);
    case FormulaKind::Since: {
        // once a  ==  true since a
        if (f.left->kind == FormulaKind::True)
            return wrap("once " + formula_text(*f.right, kUnary), kUnary, min_level);
        return wrap(formula_text(*f.left, kPrimary) + " since " + formula_text(*f.right, kSince),
                    kSince, min_level);
    }
    case FormulaKind::ForallP:
        return wrap("forall " + var_list(f.vars) + ":" + f.name + ". " + formula_text(*f.left, 0), 0,
                    min_level);
    case FormulaKind::Count:
        return wrap("count " + f.vars[0].name + " : " + formula_text(*f.left, 0) + ". " +
                        formula_text(*f.right, 0),
                    0, min_level);
    case FormulaKind::ForallG:
        return wrap("forall " + var_list(f.vars) + ":" + guard_text(*f.guard, kGPrimary) + ". " +
                        formula_text(*f.left, 0),
                    0, min_level);
    case FormulaKind::ExistsG:
        return wrap("exists " + var_list(f.vars) + ":" + guard_text(*f.guard, kGPrimary) + ". " +
                        formula_text(*f.left, 0),
                    0, min_level);
    }
    return "?";
}

} // namespace

std::string format_term(const Term& t) { return term_text(t, 0); }
std::string format_guard(const Guard& g) { return guard_text(g, 0); }
std::string format_formula(const Formula& f) { return formula_text(f, 0); }

} // namespace histmon
