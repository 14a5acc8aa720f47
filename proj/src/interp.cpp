#include "histmon/interp.hpp"

namespace histmon {

bool pat_accepts(ArgPat p, Sort s) {
    switch (p) {
    case ArgPat::Int: return s == Sort::Int;
    case ArgPat::Rat: return s == Sort::Rat;
    case ArgPat::Str: return s == Sort::Str;
    case ArgPat::Num: return s == Sort::Int || s == Sort::Rat;
    }
    return false;
}

static bool pats_accept(const std::vector<ArgPat>& ps, const std::vector<Sort>& ss) {
    if (ps.size() != ss.size()) return false;
    for (size_t i = 0; i < ps.size(); ++i)
        if (!pat_accepts(ps[i], ss[i])) return false;
    return true;
}

const Registry::FnOverload* Registry::find_function(const std::string& name,
                                                    const std::vector<Sort>& args) const {
    auto it = fns_.find(name);
    if (it == fns_.end()) return nullptr;
    for (const auto& o : it->second)
        if (pats_accept(o.params, args)) return &o;
    return nullptr;
}

const Registry::RelOverload* Registry::find_relation(const std::string& name,
                                                     const std::vector<Sort>& args) const {
    auto it = rels_.find(name);
    if (it == rels_.end()) return nullptr;
    for (const auto& o : it->second)
        if (pats_accept(o.params, args)) return &o;
    return nullptr;
}

std::optional<Sort> Registry::function_result(const std::string& name,
                                              const std::vector<Sort>& args) const {
    const FnOverload* o = find_function(name, args);
    if (!o) return std::nullopt;
    return o->result;
}

static int num_cmp(const Value& a, const Value& b) {
    if (a.sort() == Sort::Int && b.sort() == Sort::Int) return cmp(a.as_int(), b.as_int());
    return cmp(a.as_number(), b.as_number());
}

const Registry& Registry::builtins() {
    static const Registry reg = [] {
        Registry r;
        auto int2 = std::vector<ArgPat>{ArgPat::Int, ArgPat::Int};
        auto num2 = std::vector<ArgPat>{ArgPat::Num, ArgPat::Num};

        r.add_function("+", {int2, Sort::Int, [](const std::vector<Value>& a, Pos) {
                                 return Value::integer(mpz_class(a[0].as_int() + a[1].as_int()));
                             }});
        r.add_function("-", {int2, Sort::Int, [](const std::vector<Value>& a, Pos) {
                                 return Value::integer(mpz_class(a[0].as_int() - a[1].as_int()));
                             }});
        r.add_function("*", {int2, Sort::Int, [](const std::vector<Value>& a, Pos) {
                                 return Value::integer(mpz_class(a[0].as_int() * a[1].as_int()));
                             }});
        r.add_function("/", {num2, Sort::Rat, [](const std::vector<Value>& a, Pos pos) {
                                 mpq_class num = a[0].as_number(), den = a[1].as_number();
                                 if (den == 0) throw EvalError("division by zero", pos);
                                 return Value::rational(mpq_class(num / den));
                             }});
        // Longest prefix before the final '/'; empty when there is no '/'.
        r.add_function("path", {{ArgPat::Str}, Sort::Str, [](const std::vector<Value>& a, Pos) {
                                    const std::string& s = a[0].as_str();
                                    auto k = s.rfind('/');
                                    return Value::text(k == std::string::npos ? "" : s.substr(0, k));
                                }});

        r.add_relation("=", {num2, [](const std::vector<Value>& a) { return num_cmp(a[0], a[1]) == 0; }});
        r.add_relation("=", {{ArgPat::Str, ArgPat::Str},
                             [](const std::vector<Value>& a) { return a[0].as_str() == a[1].as_str(); }});
        r.add_relation("!=", {num2, [](const std::vector<Value>& a) { return num_cmp(a[0], a[1]) != 0; }});
        r.add_relation("!=", {{ArgPat::Str, ArgPat::Str},
                              [](const std::vector<Value>& a) { return a[0].as_str() != a[1].as_str(); }});
        r.add_relation("<=", {num2, [](const std::vector<Value>& a) { return num_cmp(a[0], a[1]) <= 0; }});
        r.add_relation(">=", {num2, [](const std::vector<Value>& a) { return num_cmp(a[0], a[1]) >= 0; }});
        r.add_relation("<", {num2, [](const std::vector<Value>& a) { return num_cmp(a[0], a[1]) < 0; }});
        r.add_relation(">", {num2, [](const std::vector<Value>& a) { return num_cmp(a[0], a[1]) > 0; }});
        return r;
    }();
    return reg;
}

Value eval_term(const Term& t, const Substitution& s, const Registry& reg) {
    switch (t.kind) {
    case TermKind::Var: {
        const Value* v = s.lookup(t.var);
        if (!v) throw EvalError("unbound variable " + t.var, t.pos);
        if (v->sort() != t.var_sort)
            throw EvalError("variable " + t.var + " bound at sort " + sort_name(v->sort()) +
                                ", expected " + sort_name(t.var_sort),
                            t.pos);
        return *v;
    }
    case TermKind::Const: return *t.value;
    case TermKind::App: {
        std::vector<Value> args;
        std::vector<Sort> sorts;
        args.reserve(t.args.size());
        for (const auto& a : t.args) {
            args.push_back(eval_term(*a, s, reg));
            sorts.push_back(a->sort());
        }
        const auto* o = reg.find_function(t.fn, sorts);
        if (!o) throw EvalError("no interpretation for function " + t.fn, t.pos);
        return o->apply(args, t.pos);
    }
    }
    throw EvalError("malformed term", t.pos);
}

bool eval_rel(const std::string& name, const std::vector<Sort>& static_sorts,
              const std::vector<Value>& args, const Registry& reg, Pos pos) {
    const auto* o = reg.find_relation(name, static_sorts);
    if (!o) throw EvalError("no interpretation for relation " + name, pos);
    return o->holds(args);
}

} // namespace histmon
