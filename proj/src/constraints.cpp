#include "histmon/constraints.hpp"

#include <algorithm>
#include <set>
#include <vector>

namespace histmon {
namespace constraints {

// ── Linear terms ─────────────────────────────────────────────────────────

Lin& Lin::add(const Lin& o, const mpz_class& scale) {
    for (const auto& [v, c] : o.coeff) {
        mpz_class& mine = coeff[v];
        mine += c * scale;
        if (mine == 0) coeff.erase(v);
    }
    k += o.k * scale;
    return *this;
}

Lin Lin::negated() const {
    Lin out;
    for (const auto& [v, c] : coeff) out.coeff.emplace(v, mpz_class(-c));
    out.k = -k;
    return out;
}

std::string Lin::to_string() const {
    std::string out;
    for (const auto& [v, c] : coeff) {
        if (out.empty()) {
            if (c == 1)
                out += v;
            else if (c == -1)
                out += "-" + v;
            else
                out += c.get_str() + "*" + v;
        } else {
            mpz_class a = abs(c);
            out += c < 0 ? " - " : " + ";
            out += a == 1 ? v : a.get_str() + "*" + v;
        }
    }
    if (out.empty()) return k.get_str();
    if (k != 0) out += (k < 0 ? " - " : " + ") + mpz_class(abs(k)).get_str();
    return out;
}

Lin lin_const(mpz_class k) {
    Lin l;
    l.k = std::move(k);
    return l;
}

Lin lin_var(const std::string& name, mpz_class coeff) {
    Lin l;
    if (coeff != 0) l.coeff.emplace(name, std::move(coeff));
    return l;
}

// ── Constructors ─────────────────────────────────────────────────────────

CPtr c_top() {
    static CPtr t = std::make_shared<C>(C{CKind::Top, {}, {}, {}, {}, {}, nullptr, nullptr});
    return t;
}

CPtr c_bot() {
    static CPtr b = std::make_shared<C>(C{CKind::Bot, {}, {}, {}, {}, {}, nullptr, nullptr});
    return b;
}

CPtr c_int(Lin lin, IntRel rel) {
    for (auto it = lin.coeff.begin(); it != lin.coeff.end();)
        it = it->second == 0 ? lin.coeff.erase(it) : std::next(it);
    if (lin.ground()) {
        bool holds = rel == IntRel::Eq ? lin.k == 0 : rel == IntRel::Le ? lin.k <= 0 : lin.k >= 0;
        return holds ? c_top() : c_bot();
    }
    // An equality is symmetric under negation; keep the leading coefficient
    // positive so equal atoms share one spelling.
    if (rel == IntRel::Eq && lin.coeff.begin()->second < 0) lin = lin.negated();
    auto c = std::make_shared<C>();
    c->kind = CKind::IntAtom;
    c->lin = std::move(lin);
    c->rel = rel;
    return c;
}

CPtr c_sym_eq(SymOperand a, SymOperand b, Sort sort) {
    const Value* va = std::get_if<Value>(&a);
    const Value* vb = std::get_if<Value>(&b);
    if (va && vb) return *va == *vb ? c_top() : c_bot();
    if (!va && !vb && std::get<std::string>(a) == std::get<std::string>(b)) return c_top();
    // Canonical operand order: variables before values, then by name/value.
    bool swap = false;
    if (va && !vb)
        swap = true;
    else if (!va && !vb)
        swap = std::get<std::string>(b) < std::get<std::string>(a);
    if (swap) std::swap(a, b);
    auto c = std::make_shared<C>();
    c->kind = CKind::SymAtom;
    c->sym_sort = sort;
    c->a = std::move(a);
    c->b = std::move(b);
    return c;
}

CPtr c_and(CPtr l, CPtr r) {
    if (l->kind == CKind::Bot || r->kind == CKind::Bot) return c_bot();
    if (l->kind == CKind::Top) return r;
    if (r->kind == CKind::Top) return l;
    auto c = std::make_shared<C>();
    c->kind = CKind::And;
    c->left = std::move(l);
    c->right = std::move(r);
    return c;
}

CPtr c_or(CPtr l, CPtr r) {
    if (l->kind == CKind::Top || r->kind == CKind::Top) return c_top();
    if (l->kind == CKind::Bot) return r;
    if (r->kind == CKind::Bot) return l;
    auto c = std::make_shared<C>();
    c->kind = CKind::Or;
    c->left = std::move(l);
    c->right = std::move(r);
    return c;
}

CPtr c_not(CPtr x) {
    if (x->kind == CKind::Top) return c_bot();
    if (x->kind == CKind::Bot) return c_top();
    if (x->kind == CKind::Not) return x->left;
    auto c = std::make_shared<C>();
    c->kind = CKind::Not;
    c->left = std::move(x);
    return c;
}

// ── Introspection ────────────────────────────────────────────────────────

static void collect_vars(const CPtr& c, std::map<std::string, Sort>& out) {
    switch (c->kind) {
    case CKind::IntAtom:
        for (const auto& [v, coeff] : c->lin.coeff) {
            auto [it, inserted] = out.emplace(v, Sort::Int);
            if (!inserted && it->second != Sort::Int)
                throw Error("unknown " + v + " used at conflicting sorts");
        }
        return;
    case CKind::SymAtom:
        for (const SymOperand* op : {&c->a, &c->b})
            if (const auto* v = std::get_if<std::string>(op)) {
                auto [it, inserted] = out.emplace(*v, c->sym_sort);
                if (!inserted && it->second != c->sym_sort)
                    throw Error("unknown " + *v + " used at conflicting sorts");
            }
        return;
    default:
        if (c->left) collect_vars(c->left, out);
        if (c->right) collect_vars(c->right, out);
    }
}

std::map<std::string, Sort> variables(const CPtr& c) {
    std::map<std::string, Sort> out;
    collect_vars(c, out);
    return out;
}

size_t node_count(const CPtr& c) {
    size_t n = 1;
    if (c->left) n += node_count(c->left);
    if (c->right) n += node_count(c->right);
    return n;
}

// ── Evaluation ───────────────────────────────────────────────────────────

static Value resolve(const SymOperand& op, const Substitution& m) {
    if (const auto* v = std::get_if<Value>(&op)) return *v;
    const std::string& name = std::get<std::string>(op);
    const Value* bound = m.lookup(name);
    if (!bound) throw Error("model does not bind " + name);
    return *bound;
}

bool evaluate(const CPtr& c, const Substitution& m) {
    switch (c->kind) {
    case CKind::Top: return true;
    case CKind::Bot: return false;
    case CKind::IntAtom: {
        mpz_class total = c->lin.k;
        for (const auto& [v, coeff] : c->lin.coeff) {
            const Value* bound = m.lookup(v);
            if (!bound) throw Error("model does not bind " + v);
            if (bound->sort() != Sort::Int) throw Error("model binds " + v + " at a non-Int sort");
            total += coeff * bound->as_int();
        }
        switch (c->rel) {
        case IntRel::Eq: return total == 0;
        case IntRel::Le: return total <= 0;
        case IntRel::Ge: return total >= 0;
        }
        return false;
    }
    case CKind::SymAtom: return resolve(c->a, m) == resolve(c->b, m);
    case CKind::And: return evaluate(c->left, m) && evaluate(c->right, m);
    case CKind::Or: return evaluate(c->left, m) || evaluate(c->right, m);
    case CKind::Not: return !evaluate(c->left, m);
    }
    return false;
}

// ── Rendering ────────────────────────────────────────────────────────────

static std::string sym_text(const SymOperand& op) {
    if (const auto* v = std::get_if<Value>(&op)) return v->to_string();
    return std::get<std::string>(op);
}

std::string to_text(const CPtr& c) {
    switch (c->kind) {
    case CKind::Top: return "true";
    case CKind::Bot: return "false";
    case CKind::IntAtom: {
        // Move the constant to the right-hand side for readability.
        Lin lhs = c->lin;
        mpz_class rhs = -lhs.k;
        lhs.k = 0;
        const char* op = c->rel == IntRel::Eq ? " = " : c->rel == IntRel::Le ? " <= " : " >= ";
        return lhs.to_string() + op + rhs.get_str();
    }
    case CKind::SymAtom: return sym_text(c->a) + " = " + sym_text(c->b);
    case CKind::And: return "(" + to_text(c->left) + " & " + to_text(c->right) + ")";
    case CKind::Or: return "(" + to_text(c->left) + " | " + to_text(c->right) + ")";
    case CKind::Not: return "!" + to_text(c->left);
    }
    return "?";
}

// ── SMT-LIB export ───────────────────────────────────────────────────────

namespace {

std::string smt_int(const mpz_class& n) {
    if (n < 0) return "(- " + mpz_class(-n).get_str() + ")";
    return n.get_str();
}

struct SmtNames {
    std::map<Sort, std::map<Value, std::string>> constants;
    std::string var(const std::string& name) const { return "|" + name + "|"; }
    std::string constant(Sort s, const Value& v) const { return constants.at(s).at(v); }
};

void collect_sym_constants(const CPtr& c, std::map<Sort, std::set<Value>>& out) {
    if (c->kind == CKind::SymAtom) {
        for (const SymOperand* op : {&c->a, &c->b})
            if (const auto* v = std::get_if<Value>(op)) out[c->sym_sort].insert(*v);
        return;
    }
    if (c->left) collect_sym_constants(c->left, out);
    if (c->right) collect_sym_constants(c->right, out);
}

std::string smt_formula(const CPtr& c, const SmtNames& names) {
    switch (c->kind) {
    case CKind::Top: return "true";
    case CKind::Bot: return "false";
    case CKind::IntAtom: {
        std::vector<std::string> parts;
        for (const auto& [v, coeff] : c->lin.coeff) {
            if (coeff == 1)
                parts.push_back(names.var(v));
            else
                parts.push_back("(* " + smt_int(coeff) + " " + names.var(v) + ")");
        }
        if (c->lin.k != 0 || parts.empty()) parts.push_back(smt_int(c->lin.k));
        std::string lhs = parts.size() == 1 ? parts[0] : [&] {
            std::string s = "(+";
            for (const auto& p : parts) s += " " + p;
            return s + ")";
        }();
        const char* op = c->rel == IntRel::Eq ? "=" : c->rel == IntRel::Le ? "<=" : ">=";
        return std::string("(") + op + " " + lhs + " 0)";
    }
    case CKind::SymAtom: {
        auto name_of = [&](const SymOperand& op) {
            if (const auto* v = std::get_if<Value>(&op)) return names.constant(c->sym_sort, *v);
            return names.var(std::get<std::string>(op));
        };
        return "(= " + name_of(c->a) + " " + name_of(c->b) + ")";
    }
    case CKind::And: return "(and " + smt_formula(c->left, names) + " " + smt_formula(c->right, names) + ")";
    case CKind::Or: return "(or " + smt_formula(c->left, names) + " " + smt_formula(c->right, names) + ")";
    case CKind::Not: return "(not " + smt_formula(c->left, names) + ")";
    }
    return "true";
}

} // namespace

std::string to_smtlib(const CPtr& c) {
    auto vars = variables(c);
    std::map<Sort, std::set<Value>> consts;
    collect_sym_constants(c, consts);

    bool uninterpreted = consts.count(Sort::Rat) || consts.count(Sort::Str);
    for (const auto& [name, sort] : vars) uninterpreted = uninterpreted || sort != Sort::Int;

    std::string out;
    out += uninterpreted ? "(set-logic QF_UFLIA)\n" : "(set-logic QF_LIA)\n";

    SmtNames names;
    for (Sort s : {Sort::Rat, Sort::Str}) {
        bool used = consts.count(s) != 0;
        for (const auto& [name, sort] : vars) used = used || sort == s;
        if (!used) continue;
        out += std::string("(declare-sort ") + sort_name(s) + " 0)\n";
        int n = 0;
        std::vector<std::string> declared;
        if (consts.count(s)) {
            for (const Value& v : consts.at(s)) {
                std::string nm = std::string(s == Sort::Rat ? "rat" : "str") + std::to_string(n++);
                names.constants[s][v] = nm;
                out += "(declare-const " + nm + " " + sort_name(s) + ") ; " + v.to_string() + "\n";
                declared.push_back(nm);
            }
        }
        if (declared.size() > 1) {
            out += "(assert (distinct";
            for (const auto& nm : declared) out += " " + nm;
            out += "))\n";
        }
    }
    for (Sort s : {Sort::Int, Sort::Rat, Sort::Str})
        for (const auto& [name, sort] : vars)
            if (sort == s) out += "(declare-const " + names.var(name) + " " + sort_name(s) + ")\n";

    out += "(assert " + smt_formula(c, names) + ")\n";
    out += "(check-sat)\n";
    return out;
}

// ── Satisfiability ───────────────────────────────────────────────────────

namespace {

struct IntLit {
    Lin lin;
    bool eq; // lin = 0 when set, lin <= 0 otherwise
};

struct SymLit {
    Sort sort;
    SymOperand a, b;
    bool positive;
};

struct BudgetStop {
    const char* what;
};

// Union-find keyed by operand identity.
class Classes {
public:
    std::string key(const SymOperand& op) {
        if (const auto* v = std::get_if<Value>(&op)) return "c " + v->to_string();
        return "v " + std::get<std::string>(op);
    }

    const std::string& find(const std::string& k) {
        auto it = parent_.find(k);
        if (it == parent_.end()) {
            parent_.emplace(k, k);
            return parent_.find(k)->first;
        }
        if (it->second == k) return it->first;
        std::string root = find(it->second);
        it->second = root;
        return parent_.find(it->second)->first;
    }

    void unite(const std::string& a, const std::string& b) {
        std::string ra = find(a), rb = find(b);
        if (ra != rb) parent_[ra] = rb;
    }

private:
    std::map<std::string, std::string> parent_;
};

class Solver {
public:
    Solver(const CPtr& root, const Budget& budget) : root_(root), budget_(budget) {}

    SatResult run() {
        SatResult res;
        try {
            agenda_.push_back({root_.get(), true});
            bool sat = walk(0);
            if (sat) {
                res.verdict = SatVerdict::Sat;
                res.model = model_;
            } else if (saw_unknown_) {
                res.verdict = SatVerdict::Unknown;
                res.reason = "budget: bounded search gave up on an unbounded branch";
            } else {
                res.verdict = SatVerdict::Unsat;
            }
        } catch (const BudgetStop& b) {
            res.verdict = SatVerdict::Unknown;
            res.reason = std::string("budget: ") + b.what;
        }
        return res;
    }

private:
    CPtr root_;
    Budget budget_;
    std::vector<std::pair<const C*, bool>> agenda_;
    std::vector<IntLit> ints_;
    std::vector<SymLit> syms_;
    std::optional<Substitution> model_;
    uint64_t branches_ = 0, derived_ = 0, search_ = 0;
    bool saw_unknown_ = false;

    bool with_int(IntLit lit, size_t idx) {
        ints_.push_back(std::move(lit));
        bool r = walk(idx + 1);
        ints_.pop_back();
        return r;
    }

    // Deterministic depth-first enumeration of disjunctive branches, in
    // literal order of first appearance.
    bool walk(size_t idx) {
        if (idx == agenda_.size()) return check_branch();
        auto [node, pol] = agenda_[idx];
        switch (node->kind) {
        case CKind::Top:
            return pol ? walk(idx + 1) : false;
        case CKind::Bot:
            return pol ? false : walk(idx + 1);
        case CKind::Not: {
            agenda_.push_back({node->left.get(), !pol});
            bool r = walk(idx + 1);
            agenda_.pop_back();
            return r;
        }
        case CKind::And:
        case CKind::Or: {
            bool conjunctive = (node->kind == CKind::And) == pol;
            if (conjunctive) {
                agenda_.push_back({node->left.get(), pol});
                agenda_.push_back({node->right.get(), pol});
                bool r = walk(idx + 1);
                agenda_.pop_back();
                agenda_.pop_back();
                return r;
            }
            agenda_.push_back({node->left.get(), pol});
            bool r = walk(idx + 1);
            agenda_.pop_back();
            if (r) return true;
            agenda_.push_back({node->right.get(), pol});
            r = walk(idx + 1);
            agenda_.pop_back();
            return r;
        }
        case CKind::SymAtom: {
            syms_.push_back({node->sym_sort, node->a, node->b, pol});
            bool r = walk(idx + 1);
            syms_.pop_back();
            return r;
        }
        case CKind::IntAtom: {
            Lin lin = node->lin;
            if (pol) {
                switch (node->rel) {
                case IntRel::Eq: return with_int({lin, true}, idx);
                case IntRel::Le: return with_int({lin, false}, idx);
                case IntRel::Ge: return with_int({lin.negated(), false}, idx);
                }
                return false;
            }
            switch (node->rel) {
            case IntRel::Eq: {
                // lin != 0 splits into lin <= -1 or lin >= 1.
                Lin low = lin;
                low.k += 1;
                if (with_int({low, false}, idx)) return true;
                Lin high = lin.negated();
                high.k += 1;
                return with_int({high, false}, idx);
            }
            case IntRel::Le: {
                Lin l = lin.negated();
                l.k += 1;
                return with_int({l, false}, idx);
            }
            case IntRel::Ge: {
                Lin l = lin;
                l.k += 1;
                return with_int({l, false}, idx);
            }
            }
            return false;
        }
        }
        return false;
    }

    // ── Branch check ──

    bool check_branch() {
        if (++branches_ > budget_.branches) throw BudgetStop{"too many branches"};

        Substitution model;
        if (!solve_syms(model)) return false;

        Feas f = solve_ints(model);
        if (f == Feas::No) return false;
        if (f == Feas::Unknown) {
            saw_unknown_ = true;
            return false;
        }

        complete_model(model);
        if (!evaluate(root_, model))
            throw Error("internal: solver model fails direct evaluation");
        model_ = std::move(model);
        return true;
    }

    // Congruence closure over Rat/Str equalities. Two distinct values in
    // one class, or a negated equality within a class, refute the branch.
    bool solve_syms(Substitution& model) {
        Classes cls;
        for (const auto& lit : syms_)
            if (lit.positive) cls.unite(cls.key(lit.a), cls.key(lit.b));
        std::map<std::string, Value> class_value;
        for (const auto& lit : syms_) {
            for (const SymOperand* op : {&lit.a, &lit.b}) {
                if (const auto* v = std::get_if<Value>(op)) {
                    std::string root = cls.find(cls.key(*op));
                    auto [it, inserted] = class_value.emplace(root, *v);
                    if (!inserted && !(it->second == *v)) return false;
                }
            }
        }
        for (const auto& lit : syms_)
            if (!lit.positive && cls.find(cls.key(lit.a)) == cls.find(cls.key(lit.b))) return false;

        // Assign: the class constant when there is one, otherwise a fresh
        // value per class; freshness keeps negated equalities satisfied.
        std::map<std::string, Value> class_fresh;
        for (const auto& lit : syms_) {
            for (const SymOperand* op : {&lit.a, &lit.b}) {
                const auto* name = std::get_if<std::string>(op);
                if (!name) continue;
                std::string root = cls.find(cls.key(*op));
                auto cv = class_value.find(root);
                if (cv != class_value.end()) {
                    model.bind(*name, cv->second);
                    continue;
                }
                auto cf = class_fresh.find(root);
                if (cf == class_fresh.end())
                    cf = class_fresh.emplace(root, fresh_value(lit.sort)).first;
                model.bind(*name, cf->second);
            }
        }
        return true;
    }

    Value fresh_value(Sort s) {
        // Distinct from every constant in the formula and from previous
        // fresh values.
        if (used_.empty()) {
            std::map<Sort, std::set<Value>> consts;
            collect_sym_constants(root_, consts);
            used_ = std::move(consts);
            used_[Sort::Rat];
            used_[Sort::Str];
        }
        if (s == Sort::Str) {
            while (true) {
                Value v = Value::text("u" + std::to_string(fresh_counter_++));
                if (used_[Sort::Str].insert(v).second) return v;
            }
        }
        while (true) {
            Value v = Value::rational(1000000 + static_cast<long>(fresh_counter_++), 1);
            if (used_[Sort::Rat].insert(v).second) return v;
        }
    }

    std::map<Sort, std::set<Value>> used_;
    uint64_t fresh_counter_ = 0;

    // ── Integer feasibility ──

    struct Step {
        std::string var;
        std::vector<Lin> uppers; // positive coefficient on var
        std::vector<Lin> lowers; // negative coefficient on var
    };

    // Tightens a <= constraint by the gcd of its coefficients; division
    // strengthens the bound, so pruning stays sound for the relaxation.
    // Returns false when the constraint is ground and violated.
    static bool tighten(Lin& l) {
        if (l.ground()) return l.k <= 0;
        mpz_class g = 0;
        for (const auto& [v, c] : l.coeff) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g > 1) {
            for (auto& [v, c] : l.coeff) c /= g;
            mpz_class q;
            mpz_class neg = -l.k;
            mpz_fdiv_q(q.get_mpz_t(), neg.get_mpz_t(), g.get_mpz_t());
            l.k = -q;
        }
        return true;
    }

    enum class Feas { Ok, No, Unknown };

    Feas solve_ints(Substitution& model) {
        std::vector<Lin> les;
        mpz_class maxabs = 1;
        auto note_magnitudes = [&](const Lin& l) {
            for (const auto& [v, c] : l.coeff)
                if (abs(c) > maxabs) maxabs = abs(c);
            if (abs(l.k) > maxabs) maxabs = abs(l.k);
        };

        for (const auto& lit : ints_) {
            if (lit.eq) {
                Lin l = lit.lin;
                if (l.ground()) {
                    if (l.k != 0) return Feas::No;
                    continue;
                }
                mpz_class g = 0;
                for (const auto& [v, c] : l.coeff) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
                if (g > 1) {
                    if (!mpz_divisible_p(l.k.get_mpz_t(), g.get_mpz_t())) return Feas::No;
                    for (auto& [v, c] : l.coeff) c /= g;
                    l.k /= g;
                }
                note_magnitudes(l);
                les.push_back(l);
                les.push_back(l.negated());
                continue;
            }
            Lin l = lit.lin;
            if (!tighten(l)) return Feas::No;
            if (l.ground()) continue;
            note_magnitudes(l);
            les.push_back(std::move(l));
        }
        if (les.empty()) return Feas::Ok;

        // Elimination order: first appearance across the literal list.
        std::vector<std::string> order;
        for (const auto& l : les)
            for (const auto& [v, c] : l.coeff)
                if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);

        std::vector<Step> steps;
        for (const auto& var : order) {
            Step st;
            st.var = var;
            std::vector<Lin> rest;
            for (auto& l : les) {
                auto it = l.coeff.find(var);
                if (it == l.coeff.end())
                    rest.push_back(std::move(l));
                else if (it->second > 0)
                    st.uppers.push_back(std::move(l));
                else
                    st.lowers.push_back(std::move(l));
            }
            for (const Lin& u : st.uppers) {
                for (const Lin& lo : st.lowers) {
                    if (++derived_ > budget_.derived) throw BudgetStop{"too many derived constraints"};
                    mpz_class a = u.coeff.at(var);          // > 0
                    mpz_class b = -lo.coeff.at(var);        // > 0
                    Lin d = lin_const(0);
                    d.add(u, b);
                    d.add(lo, a); // var cancels: b*a - a*b = 0
                    if (!tighten(d)) return Feas::No;
                    if (!d.ground()) rest.push_back(std::move(d));
                }
            }
            steps.push_back(std::move(st));
            les = std::move(rest);
        }

        // Assign in reverse elimination order. Two-sided intervals are
        // enumerated exhaustively, so failure there is a real refutation;
        // one-sided directions are scanned within a slack window of 4x the
        // largest coefficient magnitude and give Unknown when exhausted.
        mpz_class slack = 4 * maxabs;
        bool incomplete = false;
        if (assign_from(steps, static_cast<int>(steps.size()) - 1, model, slack, incomplete))
            return Feas::Ok;
        return incomplete ? Feas::Unknown : Feas::No;
    }

    bool assign_from(const std::vector<Step>& steps, int idx, Substitution& model,
                     const mpz_class& slack, bool& incomplete) {
        if (idx < 0) return true;
        const Step& st = steps[idx];

        auto residue = [&](const Lin& l) {
            mpz_class r = l.k;
            for (const auto& [v, c] : l.coeff) {
                if (v == st.var) continue;
                r += c * model.lookup(v)->as_int();
            }
            return r;
        };

        std::optional<mpz_class> lb, ub;
        for (const Lin& u : st.uppers) {
            mpz_class a = u.coeff.at(st.var), r = residue(u), q;
            mpz_class neg = -r;
            mpz_fdiv_q(q.get_mpz_t(), neg.get_mpz_t(), a.get_mpz_t()); // x <= floor(-r/a)
            if (!ub || q < *ub) ub = q;
        }
        for (const Lin& lo : st.lowers) {
            mpz_class b = -lo.coeff.at(st.var), r = residue(lo), q;
            mpz_cdiv_q(q.get_mpz_t(), r.get_mpz_t(), b.get_mpz_t()); // x >= ceil(r/b)
            if (!lb || q > *lb) lb = q;
        }

        mpz_class lo_v, hi_v;
        bool descending = false, open = false;
        if (lb && ub) {
            if (*lb > *ub) return false;
            lo_v = *lb;
            hi_v = *ub;
        } else if (lb) {
            lo_v = *lb;
            hi_v = *lb + slack;
            open = true;
        } else if (ub) {
            lo_v = *ub - slack;
            hi_v = *ub;
            descending = true;
            open = true;
        } else {
            lo_v = hi_v = 0;
        }

        for (mpz_class v = descending ? hi_v : lo_v;; v += descending ? -1 : 1) {
            if (descending ? v < lo_v : v > hi_v) break;
            if (++search_ > budget_.search_nodes) throw BudgetStop{"search space too large"};
            model.bind(st.var, Value::integer(v));
            if (assign_from(steps, idx - 1, model, slack, incomplete)) return true;
        }
        if (open) incomplete = true;
        return false;
    }

    void complete_model(Substitution& model) {
        for (const auto& [name, sort] : variables(root_)) {
            if (model.contains(name)) continue;
            switch (sort) {
            case Sort::Int: model.bind(name, Value::integer(0)); break;
            case Sort::Rat: model.bind(name, fresh_value(Sort::Rat)); break;
            case Sort::Str: model.bind(name, fresh_value(Sort::Str)); break;
            }
        }
    }
};

} // namespace

SatResult satisfiable(const CPtr& c, const Budget& budget) {
    Solver s(c, budget);
    return s.run();
}

} // namespace constraints
} // namespace histmon
