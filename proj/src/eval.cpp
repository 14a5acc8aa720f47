#include "histmon/eval.hpp"

#include "histmon/format.hpp"
#include "histmon/guards.hpp"

#include <unordered_map>

namespace histmon {
namespace eval {

namespace {

class Evaluator {
public:
    Evaluator(const History& h, const Registry& reg, const Options& opts)
        : h_(h), reg_(reg), opts_(opts) {}

    Verdict value(const FormulaPtr& f, int i, const Substitution& env) {
        Substitution key_env = restrict_to_free(f, env);
        std::string key;
        key.reserve(32);
        key += std::to_string(reinterpret_cast<uintptr_t>(f.get()));
        key += '@';
        key += std::to_string(i);
        key += key_env.to_string();
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Verdict v = compute(f, i, key_env);
        memo_.emplace(std::move(key), v);
        return v;
    }

private:
    const History& h_;
    const Registry& reg_;
    Options opts_;
    std::unordered_map<std::string, Verdict> memo_;
    std::unordered_map<const Formula*, std::vector<std::pair<std::string, Sort>>> frees_;

    Substitution restrict_to_free(const FormulaPtr& f, const Substitution& env) {
        auto it = frees_.find(f.get());
        if (it == frees_.end()) {
            std::vector<std::pair<std::string, Sort>> fv;
            for (const auto& [n, s] : free_vars(*f)) fv.emplace_back(n, s);
            it = frees_.emplace(f.get(), std::move(fv)).first;
        }
        Substitution out;
        for (const auto& [n, s] : it->second) {
            const Value* v = env.lookup(n);
            if (!v) throw EvalError("unbound variable " + n, f->pos);
            out.bind(n, *v);
        }
        return out;
    }

    Verdict done(const FormulaPtr& f, int i, const Substitution& env, const std::string& rule,
                 bool value, std::vector<TracePtr> children = {}) {
        Verdict v;
        v.value = value;
        if (opts_.build_trace) {
            auto node = std::make_shared<TraceNode>();
            node->rule = rule;
            node->formula = format_formula(*apply_substitution(f, env));
            node->index = i;
            node->value = value;
            node->children = std::move(children);
            v.trace = std::move(node);
        }
        return v;
    }

    Verdict compute(const FormulaPtr& f, int i, const Substitution& env) {
        switch (f->kind) {
        case FormulaKind::True: return done(f, i, env, "true", true);

        case FormulaKind::Pred: {
            Event e;
            e.pred = f->name;
            e.args.reserve(f->terms.size());
            for (const auto& t : f->terms) e.args.push_back(eval_term(*t, env, reg_));
            return done(f, i, env, "event", h_.at(i).contains(e));
        }

        case FormulaKind::Rel: {
            std::vector<Value> args;
            std::vector<Sort> sorts;
            args.reserve(f->terms.size());
            for (const auto& t : f->terms) {
                args.push_back(eval_term(*t, env, reg_));
                sorts.push_back(t->sort());
            }
            return done(f, i, env, "relation", eval_rel(f->name, sorts, args, reg_, f->pos));
        }

        case FormulaKind::Not: {
            Verdict c = value(f->left, i, env);
            return done(f, i, env, "not", !c.value, {c.trace});
        }

        case FormulaKind::And: {
            Verdict l = value(f->left, i, env);
            if (!l.value && !opts_.full_trace) return done(f, i, env, "and", false, {l.trace});
            Verdict r = value(f->right, i, env);
            return done(f, i, env, "and", l.value && r.value, {l.trace, r.trace});
        }

        case FormulaKind::Prev: {
            if (i == 1) return done(f, i, env, "prev-first", false);
            Verdict c = value(f->left, i - 1, env);
            return done(f, i, env, "prev", c.value, {c.trace});
        }

        case FormulaKind::Since: {
            // Unfolded: right holds here, or left holds here and the same
            // formula held one session earlier. At the first session only
            // the right disjunct can apply.
            Verdict r = value(f->right, i, env);
            if (r.value && !opts_.full_trace) return done(f, i, env, "since-here", true, {r.trace});
            if (i == 1 && !opts_.full_trace)
                return done(f, i, env, "since-first", r.value, {r.trace});
            if (opts_.full_trace && i == 1) {
                Verdict l = value(f->left, i, env);
                return done(f, i, env, r.value ? "since-here" : "since-first", r.value,
                            {r.trace, l.trace});
            }
            Verdict l = value(f->left, i, env);
            if (!l.value && !opts_.full_trace)
                return done(f, i, env, "since-fail", false, {r.trace, l.trace});
            Verdict back = value(f, i - 1, env);
            bool val = r.value || (l.value && back.value);
            std::string rule = r.value ? "since-here" : back.value && l.value ? "since-back" : "since-fail";
            return done(f, i, env, rule, val, {r.trace, l.trace, back.trace});
        }

        case FormulaKind::ForallP: {
            std::vector<TracePtr> children;
            bool all = true;
            for (const Event* e : h_.at(i).with_pred(f->name)) {
                if (e->args.size() != f->vars.size())
                    throw EvalError("event " + f->name + " arity differs from quantifier", f->pos);
                Substitution env2 = env;
                for (size_t k = 0; k < f->vars.size(); ++k) {
                    if (e->args[k].sort() != f->vars[k].sort)
                        throw EvalError("event " + f->name + " argument sort differs from quantifier",
                                        f->pos);
                    env2.bind(f->vars[k].name, e->args[k]);
                }
                Verdict c = value(f->left, i, env2);
                if (opts_.build_trace) children.push_back(c.trace);
                if (!c.value) {
                    all = false;
                    if (!opts_.full_trace) break;
                }
            }
            return done(f, i, env, "forall", all, std::move(children));
        }

        case FormulaKind::Count: {
            // Bind the variable to how many sessions up to i satisfy the
            // counted formula, then judge the body at i.
            std::vector<TracePtr> children;
            int n = 0;
            for (int j = 1; j <= i; ++j) {
                Verdict c = value(f->left, j, env);
                if (c.value) ++n;
                if (opts_.build_trace) children.push_back(c.trace);
            }
            Substitution env2 = env;
            env2.bind(f->vars[0].name, Value::integer(n));
            Verdict b = value(f->right, i, env2);
            if (opts_.build_trace) children.push_back(b.trace);
            return done(f, i, env, "count", b.value, std::move(children));
        }

        case FormulaKind::ForallG:
        case FormulaKind::ExistsG: {
            bool universal = f->kind == FormulaKind::ForallG;
            auto sols = guards::solutions(h_, i, *f->guard);
            std::vector<TracePtr> children;
            bool result = universal;
            for (const Substitution& sol : sols) {
                Substitution env2 = env.overridden_by(sol);
                Verdict c = value(f->left, i, env2);
                if (opts_.build_trace) children.push_back(c.trace);
                if (c.value != universal) {
                    result = !universal;
                    if (!opts_.full_trace) break;
                }
            }
            return done(f, i, env, universal ? "forall-guard" : "exists-guard", result,
                        std::move(children));
        }
        }
        throw EvalError("malformed formula", f->pos);
    }
};

} // namespace

Verdict eval_at(const History& h, int i, const FormulaPtr& f, const Registry& reg,
                const Options& opts) {
    if (i < 1 || i > h.size())
        throw Error("session index " + std::to_string(i) + " out of range for history of size " +
                    std::to_string(h.size()));
    Evaluator ev(h, reg, opts);
    return ev.value(f, i, Substitution{});
}

Verdict check(const History& h, const FormulaPtr& f, const Registry& reg, const Options& opts) {
    if (h.empty()) throw EmptyHistoryError();
    return eval_at(h, h.size(), f, reg, opts);
}

static void render(const TraceNode& t, std::string& out, int depth) {
    out.append(static_cast<size_t>(depth) * 2, ' ');
    out += t.value ? "T " : "F ";
    out += "@" + std::to_string(t.index) + " " + t.rule + ": " + t.formula + "\n";
    for (const auto& c : t.children)
        if (c) render(*c, out, depth + 1);
}

std::string render_trace(const TraceNode& t) {
    std::string out;
    render(t, out, 0);
    return out;
}

} // namespace eval
} // namespace histmon
