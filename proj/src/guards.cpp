#include "histmon/guards.hpp"

#include "histmon/eval.hpp"

#include <optional>

namespace histmon {
namespace guards {

namespace {

void check_same_vars(const Guard& g, const char* op) {
    auto va = guard_vars(*g.left), vb = guard_vars(*g.right);
    if (va != vb)
        throw Error(std::string("both operands of guard '") + op + "' must use the same variables");
}

// σ and τ agree on shared variables; the union if so.
std::optional<Substitution> merge(const Substitution& a, const Substitution& b) {
    Substitution out = a;
    for (const auto& [k, v] : b.entries()) {
        if (const Value* prev = out.lookup(k)) {
            if (!(*prev == v)) return std::nullopt;
        } else {
            out.bind(k, v);
        }
    }
    return out;
}

SolutionSet intersect(const SolutionSet& a, const SolutionSet& b) {
    SolutionSet out;
    for (const auto& s : a)
        if (b.count(s)) out.insert(s);
    return out;
}

SolutionSet atom_solutions(const History& h, int i, const Guard& g) {
    SolutionSet out;
    for (const Event* e : h.at(i).with_pred(g.pred)) {
        if (e->args.size() != g.args.size()) continue;
        Substitution sol;
        bool ok = true;
        for (size_t k = 0; k < g.args.size() && ok; ++k) {
            const Value& have = e->args[k];
            if (const auto* c = std::get_if<Value>(&g.args[k])) {
                ok = *c == have;
                continue;
            }
            const auto& var = std::get<TypedVar>(g.args[k]);
            if (var.sort != have.sort()) {
                ok = false;
                continue;
            }
            if (const Value* prev = sol.lookup(var.name))
                ok = *prev == have; // repeated variable must match consistently
            else
                sol.bind(var.name, have);
        }
        if (ok) out.insert(std::move(sol));
    }
    return out;
}

SolutionSet solve(const History& h, int i, const Guard& g) {
    switch (g.kind) {
    case GuardKind::Atom: return atom_solutions(h, i, g);

    case GuardKind::Conj: {
        SolutionSet l = solve(h, i, *g.left);
        if (l.empty()) return l;
        SolutionSet r = solve(h, i, *g.right);
        SolutionSet out;
        for (const auto& a : l)
            for (const auto& b : r)
                if (auto m = merge(a, b)) out.insert(std::move(*m));
        return out;
    }

    case GuardKind::Disj: {
        SolutionSet out = solve(h, i, *g.left);
        for (auto& s : solve(h, i, *g.right)) out.insert(s);
        return out;
    }

    case GuardKind::Once: {
        SolutionSet out;
        for (int j = 1; j <= i; ++j)
            for (auto& s : solve(h, j, *g.left)) out.insert(s);
        return out;
    }

    case GuardKind::Hist: {
        SolutionSet out = solve(h, 1, *g.left);
        for (int j = 2; j <= i && !out.empty(); ++j) out = intersect(out, solve(h, j, *g.left));
        return out;
    }

    case GuardKind::SinceG: {
        // Union over j <= i of: solutions of the right operand at j that
        // also solve the left operand at every k in (j, i]. The running
        // suffix intersection makes each j a single set operation.
        SolutionSet out;
        std::optional<SolutionSet> suffix;
        for (int j = i; j >= 1; --j) {
            SolutionSet here = solve(h, j, *g.right);
            if (suffix) here = intersect(here, *suffix);
            for (auto& s : here) out.insert(s);
            SolutionSet left = solve(h, j, *g.left);
            suffix = suffix ? intersect(left, *suffix) : std::move(left);
            if (suffix->empty()) break;
        }
        return out;
    }

    case GuardKind::PrevG: {
        if (i == 1) return {};
        return solve(h, i - 1, *g.left);
    }
    }
    return {};
}

} // namespace

void validate(const Guard& g) {
    switch (g.kind) {
    case GuardKind::Atom: {
        for (const auto& a : g.args)
            if (std::holds_alternative<TypedVar>(a)) return;
        throw Error("guard atom " + g.pred + " must mention at least one variable");
    }
    case GuardKind::Conj:
        validate(*g.left);
        validate(*g.right);
        return;
    case GuardKind::Disj:
        validate(*g.left);
        validate(*g.right);
        check_same_vars(g, "|");
        return;
    case GuardKind::SinceG:
        validate(*g.left);
        validate(*g.right);
        check_same_vars(g, "since");
        return;
    case GuardKind::Once:
    case GuardKind::Hist:
    case GuardKind::PrevG: validate(*g.left); return;
    }
}

SolutionSet solutions(const History& h, int i, const Guard& g) {
    if (i < 1 || i > h.size())
        throw Error("session index " + std::to_string(i) + " out of range for history of size " +
                    std::to_string(h.size()));
    validate(g);
    return solve(h, i, g);
}

bool eval_guarded(const History& h, int i, const FormulaPtr& quantifier, const Registry& reg) {
    if (quantifier->kind != FormulaKind::ForallG && quantifier->kind != FormulaKind::ExistsG)
        throw Error("eval_guarded expects a guarded quantifier");
    return eval::eval_at(h, i, quantifier, reg).value;
}

} // namespace guards
} // namespace histmon
