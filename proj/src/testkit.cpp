#include "histmon/testkit.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace histmon {
namespace testkit {

// ── Reference evaluator ──────────────────────────────────────────────────

bool oracle_eval(const History& h, int i, const FormulaPtr& f, const Registry& reg) {
    if (i < 1 || i > h.size()) throw Error("session index out of range");
    const Formula& node = *f;
    switch (node.kind) {
    case FormulaKind::True:
        return true;
    case FormulaKind::Pred: {
        Event e;
        e.pred = node.name;
        for (const auto& t : node.terms) e.args.push_back(eval_term(*t, {}, reg));
        return h.at(i).contains(e);
    }
    case FormulaKind::Rel: {
        std::vector<Sort> sorts;
        std::vector<Value> vals;
        for (const auto& t : node.terms) {
            sorts.push_back(t->sort());
            vals.push_back(eval_term(*t, {}, reg));
        }
        return eval_rel(node.name, sorts, vals, reg, node.pos);
    }
    case FormulaKind::Not:
        return !oracle_eval(h, i, node.left, reg);
    case FormulaKind::And:
        return oracle_eval(h, i, node.left, reg) && oracle_eval(h, i, node.right, reg);
    case FormulaKind::Prev:
        return i > 1 && oracle_eval(h, i - 1, node.left, reg);
    case FormulaKind::Since:
        for (int j = i; j >= 1; --j) {
            if (!oracle_eval(h, j, node.right, reg)) continue;
            bool gap = true;
            for (int k = j + 1; k <= i && gap; ++k) gap = oracle_eval(h, k, node.left, reg);
            if (gap) return true;
        }
        return false;
    case FormulaKind::ForallP: {
        for (const Event* e : h.at(i).with_pred(node.name)) {
            if (e->args.size() != node.vars.size())
                throw EvalError("event " + e->pred + " does not fit the quantifier", node.pos);
            Substitution sub;
            for (size_t j = 0; j < node.vars.size(); ++j) {
                if (e->args[j].sort() != node.vars[j].sort)
                    throw EvalError("event " + e->pred + " does not fit the quantifier", node.pos);
                sub.bind(node.vars[j].name, e->args[j]);
            }
            if (!oracle_eval(h, i, apply_substitution(node.left, sub), reg)) return false;
        }
        return true;
    }
    case FormulaKind::Count: {
        mpz_class n = 0;
        for (int j = 1; j <= i; ++j)
            if (oracle_eval(h, j, node.left, reg)) ++n;
        Substitution sub;
        sub.bind(node.vars.at(0).name, Value::integer(n));
        return oracle_eval(h, i, apply_substitution(node.right, sub), reg);
    }
    case FormulaKind::ForallG:
    case FormulaKind::ExistsG: {
        bool all = node.kind == FormulaKind::ForallG;
        for (const Substitution& sol : oracle_guard_solutions(h, i, node.guard)) {
            bool v = oracle_eval(h, i, apply_substitution(node.left, sol), reg);
            if (all && !v) return false;
            if (!all && v) return true;
        }
        return all;
    }
    }
    throw Error("internal: unhandled formula kind");
}

// ── Guard solutions by generate-and-test ─────────────────────────────────

namespace {

bool guard_admits(const History& h, int i, const Guard& g, const Substitution& sub) {
    switch (g.kind) {
    case GuardKind::Atom: {
        Event e;
        e.pred = g.pred;
        for (const GuardArg& a : g.args) {
            if (const auto* tv = std::get_if<TypedVar>(&a))
                e.args.push_back(*sub.lookup(tv->name));
            else
                e.args.push_back(std::get<Value>(a));
        }
        return h.at(i).contains(e);
    }
    case GuardKind::Conj:
        return guard_admits(h, i, *g.left, sub) && guard_admits(h, i, *g.right, sub);
    case GuardKind::Disj:
        return guard_admits(h, i, *g.left, sub) || guard_admits(h, i, *g.right, sub);
    case GuardKind::Once:
        for (int j = 1; j <= i; ++j)
            if (guard_admits(h, j, *g.left, sub)) return true;
        return false;
    case GuardKind::Hist:
        for (int j = 1; j <= i; ++j)
            if (!guard_admits(h, j, *g.left, sub)) return false;
        return true;
    case GuardKind::SinceG:
        for (int j = i; j >= 1; --j) {
            if (!guard_admits(h, j, *g.right, sub)) continue;
            bool gap = true;
            for (int k = j + 1; k <= i && gap; ++k) gap = guard_admits(h, k, *g.left, sub);
            if (gap) return true;
        }
        return false;
    case GuardKind::PrevG:
        return i > 1 && guard_admits(h, i - 1, *g.left, sub);
    }
    return false;
}

} // namespace

std::set<Substitution> oracle_guard_solutions(const History& h, int i, const GuardPtr& g) {
    std::vector<std::pair<std::string, Sort>> vars;
    for (const auto& [name, sort] : guard_vars(*g)) vars.push_back({name, sort});

    std::set<Substitution> out;
    Substitution cur;
    // Guard solutions only ever bind values that occur as event arguments,
    // so enumerating history constants is exhaustive.
    std::function<void(size_t)> go = [&](size_t idx) {
        if (idx == vars.size()) {
            if (guard_admits(h, i, *g, cur)) out.insert(cur);
            return;
        }
        for (const Value& v : h.constants_of(vars[idx].second)) {
            cur.bind(vars[idx].first, v);
            go(idx + 1);
        }
    };
    go(0);
    return out;
}

// ── Bounded completion search ────────────────────────────────────────────

namespace {

void collect_formula_constants(const Formula& f, std::map<Sort, std::set<Value>>& out) {
    std::function<void(const Term&)> term = [&](const Term& t) {
        if (t.kind == TermKind::Const) out[t.value->sort()].insert(*t.value);
        for (const auto& a : t.args) term(*a);
    };
    for (const auto& t : f.terms) term(*t);
    if (f.guard) {
        std::function<void(const Guard&)> guard = [&](const Guard& g) {
            for (const auto& a : g.args)
                if (const auto* v = std::get_if<Value>(&a)) out[v->sort()].insert(*v);
            if (g.left) guard(*g.left);
            if (g.right) guard(*g.right);
        };
        guard(*f.guard);
    }
    if (f.left) collect_formula_constants(*f.left, out);
    if (f.right) collect_formula_constants(*f.right, out);
}

} // namespace

bool psat_bounded(const POHistory& h, const FormulaPtr& f, long lo, long hi, const Registry& reg) {
    if (h.empty()) throw EmptyHistoryError();
    auto unknowns = h.variables();
    std::vector<std::pair<std::string, Sort>> vars(unknowns.begin(), unknowns.end());

    std::map<Sort, std::set<Value>> pool;
    for (const auto& [sort, values] : h.constants())
        pool[sort].insert(values.begin(), values.end());
    collect_formula_constants(*f, pool);

    // Enough pairwise-distinct fresh values per sort to separate every
    // unknown from the constants and from each other.
    std::map<Sort, int> fresh_needed;
    for (const auto& [name, sort] : vars) ++fresh_needed[sort];
    for (const auto& [sort, count] : fresh_needed) {
        if (sort == Sort::Int) continue;
        for (int n = 0, added = 0; added < count; ++n) {
            Value v = sort == Sort::Str ? Value::text("zz" + std::to_string(n))
                                        : Value::rational(900000 + n, 1);
            if (pool[sort].insert(v).second) ++added;
        }
    }

    std::vector<std::vector<Value>> candidates;
    for (const auto& [name, sort] : vars) {
        std::vector<Value> cs;
        if (sort == Sort::Int) {
            for (long v = lo; v <= hi; ++v) cs.push_back(Value::integer(v));
        } else {
            cs.assign(pool[sort].begin(), pool[sort].end());
        }
        candidates.push_back(std::move(cs));
    }

    Substitution cur;
    std::function<bool(size_t)> go = [&](size_t idx) {
        if (idx == vars.size()) {
            History g = h.substitute(cur);
            return oracle_eval(g, g.size(), f, reg);
        }
        for (const Value& v : candidates[idx]) {
            cur.bind(vars[idx].first, v);
            if (go(idx + 1)) return true;
        }
        return false;
    };
    return go(0);
}

// ── QBF ──────────────────────────────────────────────────────────────────

QbfSpec parse_qdimacs(const std::string& text) {
    QbfSpec spec;
    std::map<int, bool> quant; // var -> forall
    std::vector<int> order;
    std::istringstream in(text);
    std::string line;
    bool seen_p = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head) || head == "c") continue;
        if (head == "p") {
            std::string kind;
            int nc = 0;
            if (!(ls >> kind >> spec.nvars >> nc) || kind != "cnf")
                throw ParseError("malformed problem line: " + line);
            seen_p = true;
            continue;
        }
        if (!seen_p) throw ParseError("clause or prefix before the problem line");
        if (head == "a" || head == "e") {
            int v = 0;
            while (ls >> v && v != 0) {
                if (v < 1 || v > spec.nvars) throw ParseError("variable out of range in prefix");
                if (!quant.emplace(v, head == "a").second)
                    throw ParseError("variable " + std::to_string(v) + " quantified twice");
                order.push_back(v);
            }
            continue;
        }
        std::vector<int> clause;
        int lit = 0;
        try {
            lit = std::stoi(head);
        } catch (const std::exception&) {
            throw ParseError("unrecognized line: " + line);
        }
        while (lit != 0) {
            int v = lit < 0 ? -lit : lit;
            if (v < 1 || v > spec.nvars) throw ParseError("literal out of range in clause");
            clause.push_back(lit);
            if (!(ls >> lit)) throw ParseError("clause not terminated by 0");
        }
        spec.clauses.push_back(std::move(clause));
    }
    if (!seen_p) throw ParseError("missing problem line");
    if (spec.nvars > 16) throw Error("at most 16 variables are supported");
    if (static_cast<int>(order.size()) != spec.nvars)
        throw ParseError("every variable must be quantified exactly once");
    // Reductions treat prefix position, not variable number, as identity:
    // renumber so variable k is the k-th quantified one.
    std::map<int, int> position;
    for (int k = 0; k < spec.nvars; ++k) {
        position[order[static_cast<size_t>(k)]] = k + 1;
        spec.forall.push_back(quant.at(order[static_cast<size_t>(k)]));
    }
    for (auto& clause : spec.clauses)
        for (int& lit : clause) lit = lit < 0 ? -position.at(-lit) : position.at(lit);
    return spec;
}

bool qbf_truth(const QbfSpec& spec) {
    if (spec.nvars > 16) throw Error("at most 16 variables are supported");
    std::vector<bool> assign(static_cast<size_t>(spec.nvars) + 1);
    std::function<bool(int)> go = [&](int idx) {
        if (idx > spec.nvars) {
            for (const auto& clause : spec.clauses) {
                bool sat = false;
                for (int lit : clause)
                    if (assign[static_cast<size_t>(lit < 0 ? -lit : lit)] == (lit > 0)) {
                        sat = true;
                        break;
                    }
                if (!sat) return false;
            }
            return true;
        }
        assign[static_cast<size_t>(idx)] = false;
        bool lo = go(idx + 1);
        bool is_forall = spec.forall[static_cast<size_t>(idx) - 1];
        if (is_forall && !lo) return false;
        if (!is_forall && lo) return true;
        assign[static_cast<size_t>(idx)] = true;
        return go(idx + 1);
    };
    return go(1);
}

QbfEncoding encode_qbf(const QbfSpec& spec, QbfShape shape) {
    if (spec.nvars > 16) throw Error("at most 16 variables are supported");
    if (static_cast<int>(spec.forall.size()) != spec.nvars)
        throw Error("prefix length does not match the variable count");
    QbfEncoding enc;
    enc.preds.push_back({"true_", {Sort::Int}});
    for (int v = 1; v <= spec.nvars; ++v)
        enc.preds.push_back({"p" + std::to_string(v), {Sort::Int}});

    auto var_name = [](int v) { return "x" + std::to_string(v); };

    // Matrix: a literal of variable v holds when its chosen value is 1,
    // which is exactly when true_(xv) is in the session at hand.
    FormulaPtr matrix = f_true();
    bool first_clause = true;
    for (const auto& clause : spec.clauses) {
        FormulaPtr cf = f_false();
        bool first_lit = true;
        for (int lit : clause) {
            int v = lit < 0 ? -lit : lit;
            FormulaPtr atom = f_pred("true_", {t_var(var_name(v), Sort::Int)});
            if (lit < 0) atom = f_not(atom);
            cf = first_lit ? atom : f_or(cf, atom);
            first_lit = false;
        }
        matrix = first_clause ? cf : f_and(matrix, cf);
        first_clause = false;
    }

    FormulaPtr policy = matrix;
    for (int v = spec.nvars; v >= 1; --v) {
        std::string pv = "p" + std::to_string(v);
        std::vector<TypedVar> binder = {{var_name(v), Sort::Int}};
        bool fa = spec.forall[static_cast<size_t>(v) - 1];
        if (shape == QbfShape::SingleSession) {
            policy = fa ? f_forall_p(binder, pv, policy) : f_exists_p(binder, pv, policy);
        } else {
            // The temporal operator widens the view to the sessions where
            // pv's candidate values live; sessions without pv events make
            // the inner quantifier trivial.
            policy = fa ? f_historically(f_forall_p(binder, pv, policy))
                        : f_once(f_exists_p(binder, pv, policy));
        }
    }
    enc.policy = policy;

    Event marker{"true_", {Value::integer(1)}};
    if (shape == QbfShape::SingleSession) {
        std::vector<Event> events{marker};
        for (int v = 1; v <= spec.nvars; ++v) {
            events.push_back({"p" + std::to_string(v), {Value::integer(0)}});
            events.push_back({"p" + std::to_string(v), {Value::integer(1)}});
        }
        enc.history.append(Session::of(std::move(events)));
    } else {
        // Innermost variable first; the outermost quantifier scans the
        // whole history, so its sessions come last.
        for (int v = spec.nvars; v >= 1; --v)
            for (int bit = 0; bit <= 1; ++bit)
                enc.history.append(Session::of(
                    {marker, {"p" + std::to_string(v), {Value::integer(bit)}}}));
    }
    return enc;
}

// ── Random instances ─────────────────────────────────────────────────────

int Rng::range(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(g_);
}

bool Rng::chance(int percent) { return range(1, 100) <= percent; }

PredTable test_signature() {
    return {
        {"p", {Sort::Int}},
        {"q", {Sort::Int, Sort::Int}},
        {"r", {Sort::Str}},
        {"b", {}},
    };
}

Value random_value(Rng& rng, Sort s) {
    switch (s) {
    case Sort::Int: return Value::integer(rng.range(0, 3));
    case Sort::Rat: return Value::rational(rng.range(-2, 2), rng.range(1, 3));
    case Sort::Str: break;
    }
    static const std::vector<std::string> strs = {"a", "b", "c"};
    return Value::text(rng.pick(strs));
}

History random_history(Rng& rng, int sessions, int max_events_per_session) {
    PredTable sig = test_signature();
    History h;
    for (int s = 0; s < sessions; ++s) {
        std::vector<Event> events;
        int n = rng.range(0, max_events_per_session);
        for (int e = 0; e < n; ++e) {
            const PredDecl& d = sig[static_cast<size_t>(rng.range(0, 3))];
            Event ev;
            ev.pred = d.name;
            for (Sort slot : d.arg_sorts) ev.args.push_back(random_value(rng, slot));
            events.push_back(std::move(ev));
        }
        h.append(Session::of(std::move(events)));
    }
    return h;
}

namespace {

struct FormulaGen {
    Rng& rng;
    PredTable sig = test_signature();
    int guard_serial = 0;

    TermPtr term(Sort s, const std::vector<TypedVar>& scope, bool allow_arith) {
        std::vector<TypedVar> fits;
        for (const auto& tv : scope)
            if (tv.sort == s) fits.push_back(tv);
        if (!fits.empty() && rng.chance(60)) {
            TermPtr v = t_var(rng.pick(fits).name, s);
            if (s == Sort::Int && allow_arith && rng.chance(30)) {
                int c = rng.range(0, 3);
                switch (rng.range(0, 2)) {
                case 0: return t_app("+", {v, t_const(Value::integer(c))}, Sort::Int);
                case 1: return t_app("-", {v, t_const(Value::integer(c))}, Sort::Int);
                default:
                    return t_app("*", {t_const(Value::integer(rng.range(1, 3))), v}, Sort::Int);
                }
            }
            return v;
        }
        return t_const(random_value(rng, s));
    }

    FormulaPtr atom(const std::vector<TypedVar>& scope) {
        if (rng.chance(30)) {
            // Interpreted comparison over Int terms.
            static const std::vector<std::string> rels = {"=", "!=", "<=", "<", ">=", ">"};
            return f_rel(rng.pick(rels), {term(Sort::Int, scope, true), term(Sort::Int, scope, true)});
        }
        const PredDecl& d = sig[static_cast<size_t>(rng.range(0, 3))];
        std::vector<TermPtr> args;
        for (Sort slot : d.arg_sorts) args.push_back(term(slot, scope, true));
        return f_pred(d.name, std::move(args));
    }

    FormulaPtr gen(int depth, std::vector<TypedVar> scope, bool allow_count, bool allow_guards) {
        if (depth <= 0) return rng.chance(10) ? f_true() : atom(scope);
        int roll = rng.range(1, 100);
        if (roll <= 35) return atom(scope);
        if (roll <= 50)
            return f_and(gen(depth - 1, scope, allow_count, allow_guards),
                         gen(depth - 1, scope, allow_count, allow_guards));
        if (roll <= 60) return f_not(gen(depth - 1, scope, allow_count, allow_guards));
        if (roll <= 70) return f_prev(gen(depth - 1, scope, allow_count, allow_guards));
        if (roll <= 80)
            return f_since(gen(depth - 1, scope, allow_count, allow_guards),
                           gen(depth - 1, scope, allow_count, allow_guards));
        if (roll <= 90 || (!allow_count && !allow_guards)) {
            const PredDecl& d = sig[static_cast<size_t>(rng.range(0, 2))]; // p, q, r
            std::vector<TypedVar> binders;
            for (size_t j = 0; j < d.arg_sorts.size(); ++j)
                binders.push_back({"v" + std::to_string(scope.size() + j), d.arg_sorts[j]});
            std::vector<TypedVar> inner = scope;
            inner.insert(inner.end(), binders.begin(), binders.end());
            FormulaPtr body = gen(depth - 1, inner, allow_count, allow_guards);
            return rng.chance(50) ? f_forall_p(binders, d.name, body)
                                  : f_exists_p(binders, d.name, body);
        }
        if (allow_count && (!allow_guards || rng.chance(50))) {
            TypedVar n{"n" + std::to_string(scope.size()), Sort::Int};
            FormulaPtr counted = gen(depth - 1, scope, false, false);
            std::vector<TypedVar> inner = scope;
            inner.push_back(n);
            FormulaPtr body;
            if (rng.chance(50)) {
                static const std::vector<std::string> rels = {"=", "<=", ">=", "<", ">"};
                body = f_rel(rng.pick(rels),
                             {t_var(n.name, Sort::Int), t_const(Value::integer(rng.range(0, 4)))});
            } else {
                body = gen(depth - 1, inner, false, false);
            }
            return f_count(n, counted, body);
        }
        std::vector<TypedVar> binders = random_binders(rng);
        // Suffix the names so nested guards never collide with the scope.
        for (auto& b : binders) b.name += "g" + std::to_string(guard_serial++);
        GuardPtr g = random_guard(rng, binders, 2);
        std::vector<TypedVar> inner = scope;
        inner.insert(inner.end(), binders.begin(), binders.end());
        FormulaPtr body = gen(depth - 1, inner, false, false);
        return rng.chance(50) ? f_forall_g(binders, g, body) : f_exists_g(binders, g, body);
    }
};

} // namespace

FormulaPtr random_formula(Rng& rng, int depth, bool allow_count, bool allow_guards) {
    FormulaGen gen{rng};
    return gen.gen(depth, {}, allow_count, allow_guards);
}

std::vector<TypedVar> random_binders(Rng& rng) {
    if (rng.chance(25)) return {{"s", Sort::Str}};
    if (rng.chance(40)) return {{"x", Sort::Int}, {"y", Sort::Int}};
    return {{"x", Sort::Int}};
}

GuardPtr random_guard(Rng& rng, const std::vector<TypedVar>& binders, int depth) {
    // Atoms host every binder at once: p/q for Int binders, r for the Str
    // binder. Connectives therefore keep operand variable sets equal, which
    // the well-formedness rules require.
    auto atom = [&]() -> GuardPtr {
        if (binders.size() == 1 && binders[0].sort == Sort::Str)
            return g_atom("r", {binders[0]});
        if (binders.size() == 2) {
            if (rng.chance(30)) // both slots from one binder each, maybe swapped
                return g_atom("q", {binders[1], binders[0]});
            return g_atom("q", {binders[0], binders[1]});
        }
        switch (rng.range(0, 2)) {
        case 0: return g_atom("p", {binders[0]});
        case 1: return g_atom("q", {binders[0], GuardArg(random_value(rng, Sort::Int))});
        default: return g_atom("q", {binders[0], binders[0]});
        }
    };
    if (depth <= 0) return atom();
    switch (rng.range(0, 6)) {
    case 0: return atom();
    case 1:
        return g_conj(random_guard(rng, binders, depth - 1), random_guard(rng, binders, depth - 1));
    case 2:
        return g_disj(random_guard(rng, binders, depth - 1), random_guard(rng, binders, depth - 1));
    case 3: return g_once(random_guard(rng, binders, depth - 1));
    case 4: return g_hist(random_guard(rng, binders, depth - 1));
    case 5:
        return g_since(random_guard(rng, binders, depth - 1),
                       random_guard(rng, binders, depth - 1));
    default: return g_prev(random_guard(rng, binders, depth - 1));
    }
}

POHistory random_po_instance(Rng& rng, const History& h, int percent_unknown) {
    POHistory po = POHistory::lift(h);
    POHistory out;
    for (const POSession& s : po.sessions()) {
        std::vector<POEvent> events;
        for (const POEvent& e : s.events()) {
            POEvent ne = e;
            for (POArg& a : ne.args) {
                if (!rng.chance(percent_unknown)) continue;
                Sort sort = std::get<Value>(a).sort();
                std::string prefix = sort == Sort::Int ? "I" : sort == Sort::Rat ? "R" : "S";
                a = HistVar{prefix + std::to_string(rng.range(0, 2)), sort};
            }
            events.push_back(std::move(ne));
        }
        out.append(POSession::of(std::move(events)));
    }
    return out;
}

constraints::CPtr random_constraint(Rng& rng, int nvars, int depth) {
    std::vector<std::string> vars;
    for (int v = 0; v < std::min(nvars, 3); ++v) vars.push_back(std::string(1, char('x' + v)));

    auto atom = [&]() -> constraints::CPtr {
        using constraints::IntRel;
        int pick = rng.range(0, 5);
        IntRel rel = pick < 2 ? IntRel::Eq : pick < 4 ? IntRel::Le : IntRel::Ge;
        bool negate = pick % 2 == 1;
        constraints::Lin lin;
        if (rng.chance(60) || vars.size() < 2) {
            lin = constraints::lin_var(rng.pick(vars), rng.range(1, 3));
            lin.k = -rng.range(-8, 8); // k*x rel c written as k*x - c rel 0
        } else {
            const std::string& a = rng.pick(vars);
            const std::string& b = rng.pick(vars);
            lin = constraints::lin_var(a);
            lin.add(constraints::lin_var(b), -1);
        }
        constraints::CPtr c = constraints::c_int(std::move(lin), rel);
        return negate ? constraints::c_not(c) : c;
    };

    std::function<constraints::CPtr(int)> go = [&](int d) -> constraints::CPtr {
        if (d <= 0 || rng.chance(35)) return atom();
        switch (rng.range(0, 2)) {
        case 0: return constraints::c_and(go(d - 1), go(d - 1));
        case 1: return constraints::c_or(go(d - 1), go(d - 1));
        default: return constraints::c_not(go(d - 1));
        }
    };
    return go(depth);
}

bool brute_force_sat(const constraints::CPtr& c, long lo, long hi) {
    std::vector<std::string> vars;
    for (const auto& [name, sort] : constraints::variables(c)) {
        if (sort != Sort::Int) throw Error("brute force supports Int-only constraints");
        vars.push_back(name);
    }
    Substitution cur;
    std::function<bool(size_t)> go = [&](size_t idx) {
        if (idx == vars.size()) return constraints::evaluate(c, cur);
        for (long v = lo; v <= hi; ++v) {
            cur.bind(vars[idx], Value::integer(v));
            if (go(idx + 1)) return true;
        }
        return false;
    };
    return go(0);
}

} // namespace testkit
} // namespace histmon
