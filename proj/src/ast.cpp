#include "histmon/ast.hpp"

namespace histmon {

// ── Builders ─────────────────────────────────────────────────────────────

TermPtr t_var(std::string name, Sort sort, Pos pos) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Var;
    t->pos = pos;
    t->var = std::move(name);
    t->var_sort = sort;
    return t;
}

TermPtr t_const(Value v, Pos pos) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Const;
    t->pos = pos;
    t->value = std::move(v);
    return t;
}

TermPtr t_app(std::string fn, std::vector<TermPtr> args, Sort result_sort, Pos pos) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::App;
    t->pos = pos;
    t->fn = std::move(fn);
    t->args = std::move(args);
    t->result_sort = result_sort;
    return t;
}

GuardPtr g_atom(std::string pred, std::vector<GuardArg> args, Pos pos) {
    auto g = std::make_shared<Guard>();
    g->kind = GuardKind::Atom;
    g->pos = pos;
    g->pred = std::move(pred);
    g->args = std::move(args);
    return g;
}

static GuardPtr g_node(GuardKind k, GuardPtr a, GuardPtr b, Pos pos) {
    auto g = std::make_shared<Guard>();
    g->kind = k;
    g->pos = pos;
    g->left = std::move(a);
    g->right = std::move(b);
    return g;
}

GuardPtr g_conj(GuardPtr a, GuardPtr b, Pos pos) { return g_node(GuardKind::Conj, std::move(a), std::move(b), pos); }
GuardPtr g_disj(GuardPtr a, GuardPtr b, Pos pos) { return g_node(GuardKind::Disj, std::move(a), std::move(b), pos); }
GuardPtr g_once(GuardPtr a, Pos pos) { return g_node(GuardKind::Once, std::move(a), nullptr, pos); }
GuardPtr g_hist(GuardPtr a, Pos pos) { return g_node(GuardKind::Hist, std::move(a), nullptr, pos); }
GuardPtr g_since(GuardPtr a, GuardPtr b, Pos pos) { return g_node(GuardKind::SinceG, std::move(a), std::move(b), pos); }
GuardPtr g_prev(GuardPtr a, Pos pos) { return g_node(GuardKind::PrevG, std::move(a), nullptr, pos); }

std::map<std::string, Sort> guard_vars(const Guard& g) {
    std::map<std::string, Sort> out;
    if (g.kind == GuardKind::Atom) {
        for (const auto& a : g.args)
            if (auto* v = std::get_if<TypedVar>(&a)) out.emplace(v->name, v->sort);
        return out;
    }
    if (g.left)
        for (const auto& [k, s] : guard_vars(*g.left)) out.emplace(k, s);
    if (g.right)
        for (const auto& [k, s] : guard_vars(*g.right)) out.emplace(k, s);
    return out;
}

static FormulaPtr f_node(FormulaKind k, FormulaPtr a, FormulaPtr b, Pos pos) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->pos = pos;
    f->left = std::move(a);
    f->right = std::move(b);
    return f;
}

FormulaPtr f_true() {
    static FormulaPtr t = f_node(FormulaKind::True, nullptr, nullptr, {});
    return t;
}

FormulaPtr f_pred(std::string name, std::vector<TermPtr> terms, Pos pos) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Pred;
    f->pos = pos;
    f->name = std::move(name);
    f->terms = std::move(terms);
    return f;
}

FormulaPtr f_rel(std::string name, std::vector<TermPtr> terms, Pos pos) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Rel;
    f->pos = pos;
    f->name = std::move(name);
    f->terms = std::move(terms);
    return f;
}

FormulaPtr f_not(FormulaPtr a, Pos pos) { return f_node(FormulaKind::Not, std::move(a), nullptr, pos); }
FormulaPtr f_and(FormulaPtr a, FormulaPtr b, Pos pos) { return f_node(FormulaKind::And, std::move(a), std::move(b), pos); }
FormulaPtr f_prev(FormulaPtr a, Pos pos) { return f_node(FormulaKind::Prev, std::move(a), nullptr, pos); }
FormulaPtr f_since(FormulaPtr a, FormulaPtr b, Pos pos) { return f_node(FormulaKind::Since, std::move(a), std::move(b), pos); }

FormulaPtr f_forall_p(std::vector<TypedVar> vars, std::string pred, FormulaPtr body, Pos pos) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::ForallP;
    f->pos = pos;
    f->name = std::move(pred);
    f->vars = std::move(vars);
    f->left = std::move(body);
    return f;
}

FormulaPtr f_count(TypedVar var, FormulaPtr counted, FormulaPtr body, Pos pos) {
    if (var.sort != Sort::Int)
        throw SortError("count variable " + var.name + " must have sort Int", pos);
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Count;
    f->pos = pos;
    f->vars = {std::move(var)};
    f->left = std::move(counted);
    f->right = std::move(body);
    return f;
}

static FormulaPtr f_guarded(FormulaKind k, std::vector<TypedVar> vars, GuardPtr guard, FormulaPtr body,
                            Pos pos) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->pos = pos;
    f->vars = std::move(vars);
    f->guard = std::move(guard);
    f->left = std::move(body);
    return f;
}

FormulaPtr f_forall_g(std::vector<TypedVar> vars, GuardPtr guard, FormulaPtr body, Pos pos) {
    return f_guarded(FormulaKind::ForallG, std::move(vars), std::move(guard), std::move(body), pos);
}

FormulaPtr f_exists_g(std::vector<TypedVar> vars, GuardPtr guard, FormulaPtr body, Pos pos) {
    return f_guarded(FormulaKind::ExistsG, std::move(vars), std::move(guard), std::move(body), pos);
}

FormulaPtr f_false() { return f_not(f_true()); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b, Pos pos) {
    return f_not(f_and(f_not(std::move(a)), f_not(std::move(b)), pos), pos);
}
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b, Pos pos) {
    return f_not(f_and(std::move(a), f_not(std::move(b)), pos), pos);
}
FormulaPtr f_once(FormulaPtr a, Pos pos) { return f_since(f_true(), std::move(a), pos); }
FormulaPtr f_historically(FormulaPtr a, Pos pos) {
    return f_not(f_since(f_true(), f_not(std::move(a)), pos), pos);
}
FormulaPtr f_exists_p(std::vector<TypedVar> vars, std::string pred, FormulaPtr body, Pos pos) {
    return f_not(f_forall_p(std::move(vars), std::move(pred), f_not(std::move(body)), pos), pos);
}

const PredDecl* find_pred(const PredTable& table, const std::string& name) {
    for (const auto& d : table)
        if (d.name == name) return &d;
    return nullptr;
}

// ── Free variables ───────────────────────────────────────────────────────

static void collect_term_vars(const Term& t, std::map<std::string, Sort>& out) {
    switch (t.kind) {
    case TermKind::Var: out.emplace(t.var, t.var_sort); break;
    case TermKind::Const: break;
    case TermKind::App:
        for (const auto& a : t.args) collect_term_vars(*a, out);
        break;
    }
}

std::map<std::string, Sort> free_vars(const Term& t) {
    std::map<std::string, Sort> out;
    collect_term_vars(t, out);
    return out;
}

static void erase_bound(std::map<std::string, Sort>& m, const std::vector<TypedVar>& bound) {
    for (const auto& v : bound) m.erase(v.name);
}

std::map<std::string, Sort> free_vars(const Formula& f) {
    std::map<std::string, Sort> out;
    switch (f.kind) {
    case FormulaKind::True: break;
    case FormulaKind::Pred:
    case FormulaKind::Rel:
        for (const auto& t : f.terms) collect_term_vars(*t, out);
        break;
    case FormulaKind::Not:
    case FormulaKind::Prev: out = free_vars(*f.left); break;
    case FormulaKind::And:
    case FormulaKind::Since: {
        out = free_vars(*f.left);
        for (const auto& [k, s] : free_vars(*f.right)) out.emplace(k, s);
        break;
    }
    case FormulaKind::ForallP: {
        out = free_vars(*f.left);
        erase_bound(out, f.vars);
        break;
    }
    case FormulaKind::Count: {
        out = free_vars(*f.left);
        auto body = free_vars(*f.right);
        erase_bound(body, f.vars);
        for (const auto& [k, s] : body) out.emplace(k, s);
        erase_bound(out, f.vars);
        break;
    }
    case FormulaKind::ForallG:
    case FormulaKind::ExistsG: {
        out = guard_vars(*f.guard);
        for (const auto& [k, s] : free_vars(*f.left)) out.emplace(k, s);
        erase_bound(out, f.vars);
        break;
    }
    }
    return out;
}

bool is_closed(const Formula& f) { return free_vars(f).empty(); }

bool uses_count(const Formula& f) {
    if (f.kind == FormulaKind::Count) return true;
    if (f.left && uses_count(*f.left)) return true;
    if (f.right && uses_count(*f.right)) return true;
    return false;
}

bool uses_guards(const Formula& f) {
    if (f.kind == FormulaKind::ForallG || f.kind == FormulaKind::ExistsG) return true;
    if (f.left && uses_guards(*f.left)) return true;
    if (f.right && uses_guards(*f.right)) return true;
    return false;
}

// ── Substitution ─────────────────────────────────────────────────────────

TermPtr apply_substitution(const TermPtr& t, const Substitution& s) {
    switch (t->kind) {
    case TermKind::Var: {
        const Value* v = s.lookup(t->var);
        if (!v) return t;
        if (v->sort() != t->var_sort)
            throw SortError("substituting " + std::string(sort_name(v->sort())) + " value for " +
                                sort_name(t->var_sort) + " variable " + t->var,
                            t->pos);
        return t_const(*v, t->pos);
    }
    case TermKind::Const: return t;
    case TermKind::App: {
        std::vector<TermPtr> args;
        args.reserve(t->args.size());
        bool changed = false;
        for (const auto& a : t->args) {
            args.push_back(apply_substitution(a, s));
            changed = changed || args.back() != a;
        }
        if (!changed) return t;
        return t_app(t->fn, std::move(args), t->result_sort, t->pos);
    }
    }
    return t;
}

static GuardPtr apply_substitution_guard(const GuardPtr& g, const Substitution& s) {
    if (g->kind == GuardKind::Atom) {
        std::vector<GuardArg> args;
        args.reserve(g->args.size());
        bool changed = false;
        for (const auto& a : g->args) {
            if (auto* v = std::get_if<TypedVar>(&a)) {
                if (const Value* val = s.lookup(v->name)) {
                    if (val->sort() != v->sort)
                        throw SortError("substituting " + std::string(sort_name(val->sort())) +
                                            " value for " + sort_name(v->sort) + " variable " + v->name,
                                        g->pos);
                    args.push_back(*val);
                    changed = true;
                    continue;
                }
            }
            args.push_back(a);
        }
        if (!changed) return g;
        return g_atom(g->pred, std::move(args), g->pos);
    }
    GuardPtr l = g->left ? apply_substitution_guard(g->left, s) : nullptr;
    GuardPtr r = g->right ? apply_substitution_guard(g->right, s) : nullptr;
    if (l == g->left && r == g->right) return g;
    auto out = std::make_shared<Guard>(*g);
    out->left = std::move(l);
    out->right = std::move(r);
    return out;
}

FormulaPtr apply_substitution(const FormulaPtr& f, const Substitution& s) {
    if (s.empty()) return f;
    switch (f->kind) {
    case FormulaKind::True: return f;
    case FormulaKind::Pred:
    case FormulaKind::Rel: {
        std::vector<TermPtr> terms;
        terms.reserve(f->terms.size());
        bool changed = false;
        for (const auto& t : f->terms) {
            terms.push_back(apply_substitution(t, s));
            changed = changed || terms.back() != t;
        }
        if (!changed) return f;
        auto out = std::make_shared<Formula>(*f);
        out->terms = std::move(terms);
        return out;
    }
    default: break;
    }

    // Binders shadow outer bindings over every child they scope over.
    Substitution inner = s;
    if (!f->vars.empty()) {
        inner = s.restricted_to([&](const std::string& n) {
            for (const auto& v : f->vars)
                if (v.name == n) return false;
            return true;
        });
    }

    FormulaPtr l = f->left ? apply_substitution(f->left, inner) : nullptr;
    FormulaPtr r = f->right ? apply_substitution(f->right, inner) : nullptr;
    GuardPtr g = f->guard ? apply_substitution_guard(f->guard, inner) : nullptr;
    if (l == f->left && r == f->right && g == f->guard) return f;
    auto out = std::make_shared<Formula>(*f);
    out->left = std::move(l);
    out->right = std::move(r);
    out->guard = std::move(g);
    return out;
}

// ── Structure keys ───────────────────────────────────────────────────────

std::string structure_key(const Term& t) {
    switch (t.kind) {
    case TermKind::Var: return "(var " + t.var + " " + sort_name(t.var_sort) + ")";
    case TermKind::Const: return "(const " + t.value->to_string() + ")";
    case TermKind::App: {
        std::string out = "(app " + t.fn;
        for (const auto& a : t.args) out += " " + structure_key(*a);
        return out + ")";
    }
    }
    return "";
}

static std::string vars_key(const std::vector<TypedVar>& vars) {
    std::string out = "(";
    for (const auto& v : vars) out += "(" + v.name + " " + sort_name(v.sort) + ")";
    return out + ")";
}

std::string structure_key(const Guard& g) {
    switch (g.kind) {
    case GuardKind::Atom: {
        std::string out = "(gatom " + g.pred;
        for (const auto& a : g.args) {
            if (auto* v = std::get_if<TypedVar>(&a))
                out += " (var " + v->name + " " + sort_name(v->sort) + ")";
            else
                out += " (const " + std::get<Value>(a).to_string() + ")";
        }
        return out + ")";
    }
    case GuardKind::Conj: return "(gconj " + structure_key(*g.left) + " " + structure_key(*g.right) + ")";
    case GuardKind::Disj: return "(gdisj " + structure_key(*g.left) + " " + structure_key(*g.right) + ")";
    case GuardKind::Once: return "(gonce " + structure_key(*g.left) + ")";
    case GuardKind::Hist: return "(ghist " + structure_key(*g.left) + ")";
    case GuardKind::SinceG: return "(gsince " + structure_key(*g.left) + " " + structure_key(*g.right) + ")";
    case GuardKind::PrevG: return "(gprev " + structure_key(*g.left) + ")";
    }
    return "";
}

std::string structure_key(const Formula& f) {
    switch (f.kind) {
    case FormulaKind::True: return "(true)";
    case FormulaKind::Pred:
    case FormulaKind::Rel: {
        std::string out = f.kind == FormulaKind::Pred ? "(pred " : "(rel ";
        out += f.name;
        for (const auto& t : f.terms) out += " " + structure_key(*t);
        return out + ")";
    }
    case FormulaKind::Not: return "(not " + structure_key(*f.left) + ")";
    case FormulaKind::And: return "(and " + structure_key(*f.left) + " " + structure_key(*f.right) + ")";
    case FormulaKind::Prev: return "(prev " + structure_key(*f.left) + ")";
    case FormulaKind::Since: return "(since " + structure_key(*f.left) + " " + structure_key(*f.right) + ")";
    case FormulaKind::ForallP:
        return "(forallp " + vars_key(f.vars) + " " + f.name + " " + structure_key(*f.left) + ")";
    case FormulaKind::Count:
        return "(count " + vars_key(f.vars) + " " + structure_key(*f.left) + " " + structure_key(*f.right) +
               ")";
    case FormulaKind::ForallG:
        return "(forallg " + vars_key(f.vars) + " " + structure_key(*f.guard) + " " + structure_key(*f.left) +
               ")";
    case FormulaKind::ExistsG:
        return "(existsg " + vars_key(f.vars) + " " + structure_key(*f.guard) + " " + structure_key(*f.left) +
               ")";
    }
    return "";
}

} // namespace histmon
