#include "histmon/partial.hpp"

#include "histmon/eval.hpp"
#include "histmon/format.hpp"

#include <set>

namespace histmon {
namespace partial {

using constraints::CPtr;
using constraints::CKind;
using constraints::IntRel;
using constraints::Lin;
using constraints::SymOperand;

namespace {

using Env = std::map<std::string, POArg>;

Sort po_arg_sort(const POArg& a) {
    if (const auto* v = std::get_if<Value>(&a)) return v->sort();
    return std::get<HistVar>(a).sort;
}

class Compiler {
public:
    Compiler(const POHistory& h, const Registry& reg, size_t budget)
        : h_(h), reg_(reg), budget_(budget) {}

    CPtr compile(int i, const Formula& f, const Env& env) {
        step();
        switch (f.kind) {
        case FormulaKind::True:
            return constraints::c_top();
        case FormulaKind::Pred:
            return pred_atom(i, f, env);
        case FormulaKind::Rel:
            return rel_atom(f, env);
        case FormulaKind::Not:
            return constraints::c_not(compile(i, *f.left, env));
        case FormulaKind::And: {
            CPtr l = compile(i, *f.left, env);
            if (l->kind == CKind::Bot) return l;
            return constraints::c_and(l, compile(i, *f.right, env));
        }
        case FormulaKind::Prev:
            return i > 1 ? compile(i - 1, *f.left, env) : constraints::c_bot();
        case FormulaKind::Since: {
            CPtr here = compile(i, *f.right, env);
            if (i == 1 || here->kind == CKind::Top) return here;
            CPtr now = compile(i, *f.left, env);
            if (now->kind == CKind::Bot) return here;
            return constraints::c_or(here, constraints::c_and(now, compile(i - 1, f, env)));
        }
        case FormulaKind::ForallP:
            return forall_p(i, f, env);
        case FormulaKind::Count:
            throw CapabilityError(
                "the partial-observability checker does not support the count quantifier");
        case FormulaKind::ForallG:
        case FormulaKind::ExistsG:
            throw CapabilityError(
                "the partial-observability checker does not support guarded quantifiers");
        }
        throw Error("internal: unhandled formula kind");
    }

private:
    const POHistory& h_;
    const Registry& reg_;
    size_t budget_;
    size_t steps_ = 0;

    void step() {
        if (++steps_ > budget_)
            throw BudgetError("constraint compilation exceeded its node budget");
    }

    // A subterm is observed when every variable resolves to a value; such
    // terms evaluate now, so interpreted functions stay fully supported on
    // observed data.
    std::optional<Value> try_ground(const Term& t, const Env& env) {
        Substitution sub;
        for (const auto& [name, sort] : free_vars(t)) {
            auto it = env.find(name);
            if (it == env.end()) throw EvalError("unbound variable " + name, t.pos);
            const Value* v = std::get_if<Value>(&it->second);
            if (!v) return std::nullopt;
            sub.bind(name, *v);
        }
        return eval_term(t, sub, reg_);
    }

    const HistVar& unknown_of(const Term& t, const Env& env) {
        // Only reached for non-ground terms, so the binding is a HistVar.
        return std::get<HistVar>(env.at(t.var));
    }

    Lin to_lin(const Term& t, const Env& env) {
        step();
        if (auto v = try_ground(t, env)) return constraints::lin_const(v->as_int());
        switch (t.kind) {
        case TermKind::Var:
            return constraints::lin_var(unknown_of(t, env).name);
        case TermKind::Const:
            return constraints::lin_const(t.value->as_int());
        case TermKind::App: {
            if (t.fn == "+" && t.args.size() == 2)
                return to_lin(*t.args[0], env).add(to_lin(*t.args[1], env));
            if (t.fn == "-" && t.args.size() == 2)
                return to_lin(*t.args[0], env).add(to_lin(*t.args[1], env), -1);
            if (t.fn == "*" && t.args.size() == 2) {
                auto gl = try_ground(*t.args[0], env);
                auto gr = try_ground(*t.args[1], env);
                if (gl) return constraints::lin_const(0).add(to_lin(*t.args[1], env), gl->as_int());
                if (gr) return constraints::lin_const(0).add(to_lin(*t.args[0], env), gr->as_int());
                throw CapabilityError("product of two terms containing unknowns is not linear");
            }
            throw CapabilityError("function " + t.fn + " applied to a term containing unknowns");
        }
        }
        throw Error("internal: unhandled term kind");
    }

    SymOperand sym_operand(const Term& t, const Env& env) {
        if (auto v = try_ground(t, env)) return *v;
        if (t.kind == TermKind::Var) return unknown_of(t, env).name;
        throw CapabilityError("function " + t.fn + " applied to a term containing unknowns");
    }

    // ── Event atoms ──

    CPtr arg_eq(const Term& t, const POArg& a, const Env& env) {
        if (t.sort() == Sort::Int) {
            Lin l = to_lin(t, env);
            if (const auto* v = std::get_if<Value>(&a))
                l.add(constraints::lin_const(v->as_int()), -1);
            else
                l.add(constraints::lin_var(std::get<HistVar>(a).name), -1);
            return constraints::c_int(std::move(l), IntRel::Eq);
        }
        SymOperand lhs = sym_operand(t, env);
        SymOperand rhs = std::holds_alternative<Value>(a)
                             ? SymOperand(std::get<Value>(a))
                             : SymOperand(std::get<HistVar>(a).name);
        return constraints::c_sym_eq(std::move(lhs), std::move(rhs), t.sort());
    }

    CPtr pred_atom(int i, const Formula& f, const Env& env) {
        CPtr out = constraints::c_bot();
        for (const POEvent* e : h_.at(i).with_pred(f.name)) {
            if (e->args.size() != f.terms.size()) continue;
            CPtr conj = constraints::c_top();
            bool viable = true;
            for (size_t j = 0; j < f.terms.size() && viable; ++j) {
                step();
                if (f.terms[j]->sort() != po_arg_sort(e->args[j])) {
                    viable = false; // differing sorts can never be equal
                    break;
                }
                conj = constraints::c_and(conj, arg_eq(*f.terms[j], e->args[j], env));
                if (conj->kind == CKind::Bot) viable = false;
            }
            if (viable) out = constraints::c_or(out, conj);
            if (out->kind == CKind::Top) return out;
        }
        return out;
    }

    // ── Interpreted relations ──

    // One side of a numeric comparison: an observed rational value, a
    // linear form over Int unknowns, or a bare Rat unknown.
    struct NumSide {
        std::optional<mpq_class> ground;
        std::optional<Lin> lin;
        std::optional<std::string> rat_var;
    };

    NumSide num_side(const Term& t, const Env& env) {
        NumSide s;
        if (auto v = try_ground(t, env)) {
            s.ground = v->as_number();
            return s;
        }
        if (t.sort() == Sort::Int) {
            s.lin = to_lin(t, env);
            return s;
        }
        if (t.kind == TermKind::Var) {
            const HistVar& hv = unknown_of(t, env);
            if (hv.sort == Sort::Rat) {
                s.rat_var = hv.name;
                return s;
            }
        }
        throw CapabilityError("rational arithmetic over unknowns is not supported");
    }

    static CPtr int_rel(Lin d, const std::string& op) {
        if (op == "=") return constraints::c_int(std::move(d), IntRel::Eq);
        if (op == "!=") return constraints::c_not(constraints::c_int(std::move(d), IntRel::Eq));
        if (op == "<=") return constraints::c_int(std::move(d), IntRel::Le);
        if (op == ">=") return constraints::c_int(std::move(d), IntRel::Ge);
        if (op == "<") {
            d.k += 1;
            return constraints::c_int(std::move(d), IntRel::Le);
        }
        d.k -= 1;
        return constraints::c_int(std::move(d), IntRel::Ge);
    }

    // Scales an Int linear form against a rational bound: l `op` p/q over
    // the integers is q*l - p `op` 0 because q > 0 in canonical form.
    static Lin against_rational(const Lin& l, const mpq_class& q) {
        Lin d = constraints::lin_const(0);
        d.add(l, q.get_den());
        d.k -= q.get_num();
        return d;
    }

    CPtr rel_atom(const Formula& f, const Env& env) {
        std::vector<std::optional<Value>> grounds;
        bool all_ground = true;
        for (const auto& t : f.terms) {
            grounds.push_back(try_ground(*t, env));
            all_ground = all_ground && grounds.back().has_value();
        }
        if (all_ground) {
            std::vector<Sort> sorts;
            std::vector<Value> vals;
            for (size_t j = 0; j < f.terms.size(); ++j) {
                sorts.push_back(f.terms[j]->sort());
                vals.push_back(*grounds[j]);
            }
            return eval_rel(f.name, sorts, vals, reg_, f.pos) ? constraints::c_top()
                                                              : constraints::c_bot();
        }

        static const std::set<std::string> comparisons = {"=", "!=", "<=", ">=", "<", ">"};
        if (f.terms.size() != 2 || !comparisons.count(f.name))
            throw CapabilityError("relation " + f.name + " cannot be compiled over unknowns");
        bool is_eq = f.name == "=" || f.name == "!=";

        if (f.terms[0]->sort() == Sort::Str || f.terms[1]->sort() == Sort::Str) {
            SymOperand a = sym_operand(*f.terms[0], env);
            SymOperand b = sym_operand(*f.terms[1], env);
            CPtr eq = constraints::c_sym_eq(std::move(a), std::move(b), Sort::Str);
            return f.name == "!=" ? constraints::c_not(eq) : eq;
        }

        NumSide a = num_side(*f.terms[0], env);
        NumSide b = num_side(*f.terms[1], env);
        if (a.lin && b.lin) {
            Lin d = *a.lin;
            d.add(*b.lin, -1);
            return int_rel(std::move(d), f.name);
        }
        if (a.lin && b.ground) return int_rel(against_rational(*a.lin, *b.ground), f.name);
        if (a.ground && b.lin) {
            Lin d = against_rational(*b.lin, *a.ground);
            return int_rel(d.negated(), f.name);
        }
        if (is_eq && (a.rat_var || b.rat_var)) {
            auto operand = [](const NumSide& s) -> std::optional<SymOperand> {
                if (s.rat_var) return SymOperand(*s.rat_var);
                if (s.ground) return SymOperand(Value::rational(*s.ground));
                return std::nullopt;
            };
            auto oa = operand(a), ob = operand(b);
            if (oa && ob) {
                CPtr eq = constraints::c_sym_eq(std::move(*oa), std::move(*ob), Sort::Rat);
                return f.name == "!=" ? constraints::c_not(eq) : eq;
            }
        }
        throw CapabilityError(a.rat_var || b.rat_var
                                  ? "ordering or mixing a rational unknown with integer "
                                    "unknowns is not supported"
                                  : "comparison cannot be compiled over unknowns");
    }

    // ── Quantification over the current session ──

    CPtr forall_p(int i, const Formula& f, const Env& env) {
        CPtr out = constraints::c_top();
        for (const POEvent* e : h_.at(i).with_pred(f.name)) {
            step();
            if (e->args.size() != f.vars.size())
                throw EvalError("event " + e->pred + " does not fit the quantifier", f.pos);
            Env inner = env;
            for (size_t j = 0; j < f.vars.size(); ++j) {
                if (po_arg_sort(e->args[j]) != f.vars[j].sort)
                    throw EvalError("event " + e->pred + " does not fit the quantifier", f.pos);
                inner.insert_or_assign(f.vars[j].name, e->args[j]);
            }
            out = constraints::c_and(out, compile(i, *f.left, inner));
            if (out->kind == CKind::Bot) return out;
        }
        return out;
    }
};

void reject_unsupported(const Formula& f) {
    if (!is_closed(f)) {
        std::string names;
        for (const auto& [name, sort] : free_vars(f)) names += (names.empty() ? "" : ", ") + name;
        throw Error("formula must be closed; free: " + names);
    }
    if (uses_count(f))
        throw CapabilityError(
            "the partial-observability checker does not support the count quantifier");
    if (uses_guards(f))
        throw CapabilityError(
            "the partial-observability checker does not support guarded quantifiers");
}

} // namespace

CPtr compile(const POHistory& h, int i, const FormulaPtr& f, const Registry& reg,
             const Options& opts) {
    if (i < 1 || i > h.size())
        throw Error("session index " + std::to_string(i) + " out of range 1.." +
                    std::to_string(h.size()));
    reject_unsupported(*f);
    Compiler c(h, reg, opts.node_budget);
    return c.compile(i, *f, {});
}

CheckResult psat(const POHistory& h, const FormulaPtr& f, const Registry& reg,
                 const Options& opts) {
    if (h.empty()) throw EmptyHistoryError();
    CheckResult out;
    out.constraint = compile(h, h.size(), f, reg, opts);
    constraints::SatResult res = constraints::satisfiable(out.constraint, opts.solver);
    if (res.verdict == constraints::SatVerdict::Unknown)
        throw BudgetError("constraint solving gave up: " + res.reason);
    if (res.verdict == constraints::SatVerdict::Unsat) return out;

    out.holds = true;
    Substitution w = *res.model;

    // Unknowns outside the constraint are unconstrained; complete the
    // witness deterministically. Fresh strings avoid observed constants so
    // the completion introduces no accidental coincidences.
    std::set<std::string> taken;
    auto consts = h.constants();
    if (consts.count(Sort::Str))
        for (const Value& v : consts.at(Sort::Str)) taken.insert(v.as_str());
    for (const auto& [name, v] : w.entries())
        if (v.sort() == Sort::Str) taken.insert(v.as_str());
    int fresh = 0;
    for (const auto& [name, sort] : h.variables()) {
        if (w.contains(name)) continue;
        switch (sort) {
        case Sort::Int: w.bind(name, Value::integer(0)); break;
        case Sort::Rat: w.bind(name, Value::rational(0, 1)); break;
        case Sort::Str: {
            std::string s;
            do s = "u" + std::to_string(fresh++);
            while (taken.count(s));
            taken.insert(s);
            w.bind(name, Value::text(s));
            break;
        }
        }
    }

    // The compiled constraint is exact, so the witness must check out on
    // the substituted ground history.
    History g = h.substitute(w);
    if (!eval::eval_at(g, h.size(), f, reg).value)
        throw Error("internal: completion witness fails ground evaluation");
    out.witness = std::move(w);
    return out;
}

CheckResult adhere(const POHistory& h, const FormulaPtr& f, const Registry& reg,
                   const Options& opts) {
    CheckResult r = psat(h, f_not(f), reg, opts);
    CheckResult out;
    out.holds = !r.holds;
    out.witness = std::move(r.witness);
    out.constraint = r.constraint;
    return out;
}

} // namespace partial
} // namespace histmon
