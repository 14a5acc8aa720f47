#include "histmon/parser.hpp"

#include "histmon/format.hpp"

#include <json.hpp>

#include <cctype>
#include <optional>
#include <set>

namespace histmon {

namespace {

// ── Lexer ────────────────────────────────────────────────────────────────

enum class TokKind { Ident, IntLit, StrLit, Punct, End };

struct Token {
    TokKind kind;
    std::string text; // ident name or punctuation
    mpz_class ival;
    std::string sval;
    Pos pos;
};

const std::set<std::string> kKeywords = {"pred", "policy", "forall", "exists",       "count",
                                         "since", "once",  "prev",   "historically", "true",
                                         "false"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto pos_here = [&] { return Pos{line, col}; };
    auto step = [&](size_t n = 1) {
        for (size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            step();
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') step();
            continue;
        }
        Pos p = pos_here();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
                digits += src[i];
                step();
            }
            out.push_back({TokKind::IntLit, "", mpz_class(digits), "", p});
            continue;
        }
        if (ident_start(c)) {
            std::string name;
            while (i < src.size() && ident_char(src[i])) {
                name += src[i];
                step();
            }
            out.push_back({TokKind::Ident, name, 0, "", p});
            continue;
        }
        if (c == '"') {
            step();
            std::string s;
            bool closed = false;
            while (i < src.size()) {
                char d = src[i];
                if (d == '"') {
                    step();
                    closed = true;
                    break;
                }
                if (d == '\n') break;
                if (d == '\\') {
                    if (i + 1 >= src.size()) break;
                    char e = src[i + 1];
                    step(2);
                    switch (e) {
                    case '"': s += '"'; break;
                    case '\\': s += '\\'; break;
                    case 'n': s += '\n'; break;
                    case 't': s += '\t'; break;
                    default: throw ParseError(std::string("unknown escape \\") + e, p);
                    }
                    continue;
                }
                s += d;
                step();
            }
            if (!closed) throw ParseError("unterminated string literal", p);
            out.push_back({TokKind::StrLit, "", 0, s, p});
            continue;
        }
        static const char* kTwo[] = {"->", "!=", "<=", ">="};
        bool matched = false;
        for (const char* t : kTwo) {
            if (src.compare(i, 2, t) == 0) {
                out.push_back({TokKind::Punct, t, 0, "", p});
                step(2);
                matched = true;
                break;
            }
        }
        if (matched) continue;
        static const std::string kOne = "(),.:|&!=<>+-*/";
        if (kOne.find(c) != std::string::npos) {
            out.push_back({TokKind::Punct, std::string(1, c), 0, "", p});
            step();
            continue;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", p);
    }
    out.push_back({TokKind::End, "", 0, "", pos_here()});
    return out;
}

// ── Policy parser ────────────────────────────────────────────────────────

using Scope = std::map<std::string, Sort>;

struct Parser {
    const Registry& reg;
    std::vector<Token> toks;
    size_t at = 0;
    PredTable preds;

    const Token& peek(size_t k = 0) const { return toks[std::min(at + k, toks.size() - 1)]; }
    const Token& advance() { return toks[at < toks.size() - 1 ? at++ : at]; }

    bool is_punct(const std::string& p, size_t k = 0) const {
        return peek(k).kind == TokKind::Punct && peek(k).text == p;
    }
    bool is_kw(const std::string& w, size_t k = 0) const {
        return peek(k).kind == TokKind::Ident && peek(k).text == w;
    }
    bool accept_punct(const std::string& p) {
        if (!is_punct(p)) return false;
        ++at;
        return true;
    }
    bool accept_kw(const std::string& w) {
        if (!is_kw(w)) return false;
        ++at;
        return true;
    }
    std::string describe(const Token& t) const {
        switch (t.kind) {
        case TokKind::Ident: return "'" + t.text + "'";
        case TokKind::IntLit: return "number " + t.ival.get_str();
        case TokKind::StrLit: return "string literal";
        case TokKind::Punct: return "'" + t.text + "'";
        case TokKind::End: return "end of input";
        }
        return "?";
    }
    void expect_punct(const std::string& p, const std::string& what) {
        if (!accept_punct(p))
            throw ParseError("expected '" + p + "' " + what + ", found " + describe(peek()), peek().pos);
    }

    std::string expect_ident(const std::string& what) {
        if (peek().kind != TokKind::Ident)
            throw ParseError("expected " + what + ", found " + describe(peek()), peek().pos);
        return advance().text;
    }

    // ── Declarations ──

    Sort parse_sort() {
        Pos p = peek().pos;
        std::string n = expect_ident("a sort (Int, Rat, or Str)");
        if (n == "Int") return Sort::Int;
        if (n == "Rat") return Sort::Rat;
        if (n == "Str") return Sort::Str;
        throw ParseError("unknown sort " + n, p);
    }

    void parse_decl() {
        Pos p = peek().pos;
        std::string name = expect_ident("a predicate name");
        if (kKeywords.count(name)) throw ParseError("keyword '" + name + "' cannot name a predicate", p);
        if (reg.has_function(name))
            throw ParseError("'" + name + "' is an interpreted function and cannot name a predicate", p);
        if (find_pred(preds, name)) throw ParseError("predicate " + name + " declared twice", p);
        PredDecl d{name, {}};
        if (accept_punct("(")) {
            if (!is_punct(")")) {
                d.arg_sorts.push_back(parse_sort());
                while (accept_punct(",")) d.arg_sorts.push_back(parse_sort());
            }
            expect_punct(")", "after declaration sorts");
        }
        expect_punct(".", "after declaration");
        preds.push_back(std::move(d));
    }

    // ── Binder names ──

    std::string parse_binder_name(const std::vector<std::string>& taken) {
        Pos p = peek().pos;
        std::string name = expect_ident("a variable name");
        if (kKeywords.count(name)) throw ParseError("keyword '" + name + "' cannot name a variable", p);
        if (find_pred(preds, name))
            throw ParseError("variable " + name + " collides with a declared predicate", p);
        if (reg.has_function(name))
            throw ParseError("variable " + name + " collides with an interpreted function", p);
        for (const auto& t : taken)
            if (t == name) throw ParseError("variable " + name + " bound twice by one quantifier", p);
        return name;
    }

    // ── Guards ──
    //
    // varsorts collects the inferred sort of each quantified variable from
    // the declaration slots it occupies.

    struct GuardCtx {
        const std::vector<std::string>& names;
        std::map<std::string, Sort> varsorts;
    };

    GuardPtr parse_guard_atom(GuardCtx& ctx) {
        Pos p = peek().pos;
        std::string name = expect_ident("an event predicate");
        const PredDecl* decl = find_pred(preds, name);
        if (!decl) throw ParseError("unknown event predicate " + name + " in guard", p);
        if (!is_punct("("))
            throw ParseError("guard atom " + name +
                                 " needs an explicit argument list; a 0-ary predicate cannot "
                                 "constrain quantified variables",
                             peek().pos);
        advance();
        std::vector<GuardArg> args;
        if (!is_punct(")")) {
            while (true) {
                size_t slot = args.size();
                if (slot >= decl->arg_sorts.size())
                    throw ParseError("predicate " + name + " takes " +
                                         std::to_string(decl->arg_sorts.size()) + " arguments",
                                     peek().pos);
                Sort want = decl->arg_sorts[slot];
                const Token& t = peek();
                if (t.kind == TokKind::Ident && !kKeywords.count(t.text)) {
                    bool bound = false;
                    for (const auto& n : ctx.names) bound = bound || n == t.text;
                    if (!bound)
                        throw ParseError("variable " + t.text + " is not bound by this quantifier",
                                         t.pos);
                    auto [it, inserted] = ctx.varsorts.emplace(t.text, want);
                    if (!inserted && it->second != want)
                        throw SortError("variable " + t.text + " used at sorts " +
                                            sort_name(it->second) + " and " + sort_name(want),
                                        t.pos);
                    args.push_back(TypedVar{t.text, want});
                    advance();
                } else {
                    Value v = parse_ground_literal("a variable or constant");
                    if (v.sort() != want)
                        throw SortError("argument " + std::to_string(slot + 1) + " of " + name +
                                            " has sort " + sort_name(v.sort()) + ", expected " +
                                            sort_name(want),
                                        t.pos);
                    args.push_back(std::move(v));
                }
                if (!accept_punct(",")) break;
            }
        }
        expect_punct(")", "after guard arguments");
        if (args.size() != decl->arg_sorts.size())
            throw ParseError("predicate " + name + " takes " + std::to_string(decl->arg_sorts.size()) +
                                 " arguments, got " + std::to_string(args.size()),
                             p);
        bool has_var = false;
        for (const auto& a : args) has_var = has_var || std::holds_alternative<TypedVar>(a);
        if (!has_var)
            throw ParseError("guard atom " + name + " must mention at least one quantified variable",
                             p);
        return g_atom(name, std::move(args), p);
    }

    Value parse_ground_literal(const std::string& what) {
        const Token& t = peek();
        if (t.kind == TokKind::IntLit) {
            advance();
            return Value::integer(t.ival);
        }
        if (t.kind == TokKind::Punct && t.text == "-" && peek(1).kind == TokKind::IntLit) {
            advance();
            mpz_class v = advance().ival;
            return Value::integer(mpz_class(-v));
        }
        if (t.kind == TokKind::StrLit) {
            advance();
            return Value::text(t.sval);
        }
        throw ParseError("expected " + what + ", found " + describe(t), t.pos);
    }

    void check_same_vars(const GuardPtr& a, const GuardPtr& b, Pos p, const std::string& op) {
        auto va = guard_vars(*a), vb = guard_vars(*b);
        for (const auto& [n, s] : va)
            if (!vb.count(n))
                throw ParseError("both operands of '" + op + "' in a guard must use the same variables; " +
                                     n + " occurs only on the left",
                                 p);
        for (const auto& [n, s] : vb)
            if (!va.count(n))
                throw ParseError("both operands of '" + op + "' in a guard must use the same variables; " +
                                     n + " occurs only on the right",
                                 p);
    }

    GuardPtr parse_guard_primary(GuardCtx& ctx) {
        if (accept_punct("(")) {
            GuardPtr g = parse_guard_or(ctx);
            expect_punct(")", "after guard");
            return g;
        }
        return parse_guard_atom(ctx);
    }

    GuardPtr parse_guard_since(GuardCtx& ctx) {
        GuardPtr l = parse_guard_primary(ctx);
        if (is_kw("since")) {
            Pos p = advance().pos;
            GuardPtr r = parse_guard_since(ctx);
            check_same_vars(l, r, p, "since");
            return g_since(std::move(l), std::move(r), p);
        }
        return l;
    }

    GuardPtr parse_guard_unary(GuardCtx& ctx) {
        Pos p = peek().pos;
        if (accept_kw("once")) return g_once(parse_guard_unary(ctx), p);
        if (accept_kw("historically")) return g_hist(parse_guard_unary(ctx), p);
        if (accept_kw("prev")) return g_prev(parse_guard_unary(ctx), p);
        return parse_guard_since(ctx);
    }

    GuardPtr parse_guard_and(GuardCtx& ctx) {
        GuardPtr l = parse_guard_unary(ctx);
        while (is_punct("&")) {
            Pos p = advance().pos;
            l = g_conj(std::move(l), parse_guard_unary(ctx), p);
        }
        return l;
    }

    GuardPtr parse_guard_or(GuardCtx& ctx) {
        GuardPtr l = parse_guard_and(ctx);
        while (is_punct("|")) {
            Pos p = advance().pos;
            GuardPtr r = parse_guard_and(ctx);
            check_same_vars(l, r, p, "|");
            l = g_disj(std::move(l), std::move(r), p);
        }
        return l;
    }

    // ── Terms ──

    TermPtr parse_factor(const Scope& scope) {
        const Token& t = peek();
        if (t.kind == TokKind::IntLit) {
            advance();
            return t_const(Value::integer(t.ival), t.pos);
        }
        if (t.kind == TokKind::StrLit) {
            advance();
            return t_const(Value::text(t.sval), t.pos);
        }
        if (is_punct("-")) {
            Pos p = advance().pos;
            TermPtr f = parse_factor(scope);
            if (f->kind == TermKind::Const && f->value->sort() == Sort::Int)
                return t_const(Value::integer(mpz_class(-f->value->as_int())), p);
            return build_app("-", {t_const(Value::integer(0), p), f}, p);
        }
        if (accept_punct("(")) {
            TermPtr inner = parse_term(scope);
            expect_punct(")", "after term");
            return inner;
        }
        if (t.kind == TokKind::Ident && !kKeywords.count(t.text)) {
            advance();
            if (reg.has_function(t.text)) {
                expect_punct("(", "after function " + t.text);
                std::vector<TermPtr> args;
                if (!is_punct(")")) {
                    args.push_back(parse_term(scope));
                    while (accept_punct(",")) args.push_back(parse_term(scope));
                }
                expect_punct(")", "after arguments");
                return build_app(t.text, std::move(args), t.pos);
            }
            auto it = scope.find(t.text);
            if (it != scope.end()) return t_var(t.text, it->second, t.pos);
            if (find_pred(preds, t.text))
                throw ParseError("predicate " + t.text + " used as a term", t.pos);
            throw ParseError("unknown symbol " + t.text, t.pos);
        }
        throw ParseError("expected a term, found " + describe(t), t.pos);
    }

    TermPtr build_app(const std::string& fn, std::vector<TermPtr> args, Pos p) {
        std::vector<Sort> sorts;
        for (const auto& a : args) sorts.push_back(a->sort());
        auto rs = reg.function_result(fn, sorts);
        if (!rs) {
            std::string sig;
            for (size_t i = 0; i < sorts.size(); ++i) sig += std::string(i ? ", " : "") + sort_name(sorts[i]);
            throw SortError("no overload of " + fn + " on (" + sig + ")", p);
        }
        return t_app(fn, std::move(args), *rs, p);
    }

    TermPtr parse_aterm(const Scope& scope) {
        TermPtr l = parse_factor(scope);
        while (is_punct("*") || is_punct("/")) {
            std::string op = peek().text;
            Pos p = advance().pos;
            l = build_app(op, {std::move(l), parse_factor(scope)}, p);
        }
        return l;
    }

    TermPtr parse_term(const Scope& scope) {
        TermPtr l = parse_aterm(scope);
        while (is_punct("+") || is_punct("-")) {
            std::string op = peek().text;
            Pos p = advance().pos;
            l = build_app(op, {std::move(l), parse_aterm(scope)}, p);
        }
        return l;
    }

    // ── Formulas ──

    bool at_relation() const {
        return is_punct("=") || is_punct("!=") || is_punct("<=") || is_punct(">=") || is_punct("<") ||
               is_punct(">");
    }

    bool at_term_operator() const {
        return at_relation() || is_punct("+") || is_punct("-") || is_punct("*") || is_punct("/");
    }

    FormulaPtr parse_relation_atom(const Scope& scope) {
        TermPtr l = parse_term(scope);
        if (!at_relation())
            throw ParseError("expected a relation after term, found " + describe(peek()), peek().pos);
        std::string op = peek().text;
        Pos p = advance().pos;
        TermPtr r = parse_term(scope);
        if (!reg.find_relation(op, {l->sort(), r->sort()}))
            throw SortError("no relation " + op + " on (" + sort_name(l->sort()) + ", " +
                                sort_name(r->sort()) + ")",
                            p);
        return f_rel(op, {std::move(l), std::move(r)}, p);
    }

    FormulaPtr parse_pred_atom(const Scope& scope) {
        const Token& t = peek();
        std::string name = advance().text;
        const PredDecl* decl = find_pred(preds, name);
        std::vector<TermPtr> terms;
        if (accept_punct("(")) {
            if (!is_punct(")")) {
                terms.push_back(parse_term(scope));
                while (accept_punct(",")) terms.push_back(parse_term(scope));
            }
            expect_punct(")", "after arguments");
        }
        if (terms.size() != decl->arg_sorts.size())
            throw ParseError("predicate " + name + " takes " + std::to_string(decl->arg_sorts.size()) +
                                 " arguments, got " + std::to_string(terms.size()),
                             t.pos);
        for (size_t i = 0; i < terms.size(); ++i)
            if (terms[i]->sort() != decl->arg_sorts[i])
                throw SortError("argument " + std::to_string(i + 1) + " of " + name + " has sort " +
                                    sort_name(terms[i]->sort()) + ", expected " +
                                    sort_name(decl->arg_sorts[i]),
                                terms[i]->pos);
        return f_pred(name, std::move(terms), t.pos);
    }

    FormulaPtr parse_quantifier(const Scope& scope) {
        Pos p = peek().pos;
        bool universal = peek().text == "forall";
        advance();
        expect_punct("(", "after quantifier");
        std::vector<std::string> names;
        names.push_back(parse_binder_name(names));
        while (accept_punct(",")) names.push_back(parse_binder_name(names));
        expect_punct(")", "after quantified variables");
        expect_punct(":", "before guard");

        // Bare predicate: every binding of one event predicate in the
        // current session. Anything else is a guard expression.
        if (peek().kind == TokKind::Ident && !kKeywords.count(peek().text) && is_punct(".", 1)) {
            const Token& t = peek();
            const PredDecl* decl = find_pred(preds, t.text);
            if (!decl) throw ParseError("unknown event predicate " + t.text, t.pos);
            if (decl->arg_sorts.size() != names.size())
                throw ParseError("predicate " + t.text + " takes " +
                                     std::to_string(decl->arg_sorts.size()) + " arguments, but " +
                                     std::to_string(names.size()) + " variables are bound",
                                 t.pos);
            advance();
            expect_punct(".", "after guard");
            std::vector<TypedVar> vars;
            Scope inner = scope;
            for (size_t i = 0; i < names.size(); ++i) {
                vars.push_back({names[i], decl->arg_sorts[i]});
                inner.insert_or_assign(names[i], decl->arg_sorts[i]);
            }
            FormulaPtr body = parse_formula(inner);
            return universal ? f_forall_p(std::move(vars), t.text, std::move(body), p)
                             : f_exists_p(std::move(vars), t.text, std::move(body), p);
        }

        GuardCtx ctx{names, {}};
        GuardPtr guard = parse_guard_or(ctx);
        for (const auto& n : names)
            if (!ctx.varsorts.count(n))
                throw ParseError("quantified variable " + n + " does not occur in the guard", p);
        expect_punct(".", "after guard");
        std::vector<TypedVar> vars;
        Scope inner = scope;
        for (const auto& n : names) {
            vars.push_back({n, ctx.varsorts.at(n)});
            inner.insert_or_assign(n, ctx.varsorts.at(n));
        }
        FormulaPtr body = parse_formula(inner);
        return universal ? f_forall_g(std::move(vars), std::move(guard), std::move(body), p)
                         : f_exists_g(std::move(vars), std::move(guard), std::move(body), p);
    }

    FormulaPtr parse_count(const Scope& scope) {
        Pos p = peek().pos;
        advance();
        std::string name = parse_binder_name({});
        expect_punct(":", "after count variable");
        FormulaPtr counted = parse_formula(scope); // the variable is not visible here
        expect_punct(".", "after counted formula");
        Scope inner = scope;
        inner.insert_or_assign(name, Sort::Int);
        FormulaPtr body = parse_formula(inner);
        return f_count({name, Sort::Int}, std::move(counted), std::move(body), p);
    }

    FormulaPtr parse_primary(const Scope& scope) {
        const Token& t = peek();
        if (accept_kw("true")) return f_true();
        if (accept_kw("false")) return f_false();
        if (is_kw("forall") || is_kw("exists")) return parse_quantifier(scope);
        if (is_kw("count")) return parse_count(scope);

        if (is_punct("(")) {
            // "(" may group a formula or a term; try the formula reading
            // first and fall back when a term operator follows.
            size_t save = at;
            std::optional<ParseError> ferr;
            try {
                advance();
                FormulaPtr f = parse_formula(scope);
                expect_punct(")", "after formula");
                if (at_term_operator())
                    throw ParseError("operator '" + peek().text + "' cannot follow a formula",
                                     peek().pos);
                return f;
            } catch (const ParseError& e) {
                ferr = e;
            } catch (const SortError& e) {
                ferr = ParseError(e.what(), e.pos);
            }
            at = save;
            try {
                return parse_relation_atom(scope);
            } catch (const ParseError& e) {
                throw further_error(*ferr, e);
            } catch (const SortError& e) {
                throw further_error(*ferr, ParseError(e.what(), e.pos));
            }
        }

        if (t.kind == TokKind::Ident && !kKeywords.count(t.text) && find_pred(preds, t.text))
            return parse_pred_atom(scope);
        return parse_relation_atom(scope);
    }

    static ParseError further_error(const ParseError& a, const ParseError& b) {
        if (a.pos.line > b.pos.line || (a.pos.line == b.pos.line && a.pos.col > b.pos.col)) return a;
        return b;
    }

    FormulaPtr parse_since_level(const Scope& scope) {
        FormulaPtr l = parse_primary(scope);
        if (is_kw("since")) {
            Pos p = advance().pos;
            return f_since(std::move(l), parse_since_level(scope), p);
        }
        return l;
    }

    FormulaPtr parse_unary(const Scope& scope) {
        Pos p = peek().pos;
        if (accept_punct("!")) return f_not(parse_unary(scope), p);
        if (accept_kw("prev")) return f_prev(parse_unary(scope), p);
        if (accept_kw("once")) return f_once(parse_unary(scope), p);
        if (accept_kw("historically")) return f_historically(parse_unary(scope), p);
        return parse_since_level(scope);
    }

    FormulaPtr parse_and(const Scope& scope) {
        FormulaPtr l = parse_unary(scope);
        while (is_punct("&")) {
            Pos p = advance().pos;
            l = f_and(std::move(l), parse_unary(scope), p);
        }
        return l;
    }

    FormulaPtr parse_or(const Scope& scope) {
        FormulaPtr l = parse_and(scope);
        while (is_punct("|")) {
            Pos p = advance().pos;
            l = f_or(std::move(l), parse_and(scope), p);
        }
        return l;
    }

    FormulaPtr parse_formula(const Scope& scope) {
        FormulaPtr l = parse_or(scope);
        if (is_punct("->")) {
            Pos p = advance().pos;
            return f_implies(std::move(l), parse_formula(scope), p);
        }
        return l;
    }
};

} // namespace

PolicyDocument parse_policy(const std::string& text, const Registry& reg) {
    Parser p{reg, lex(text), 0, {}};
    while (p.accept_kw("pred")) p.parse_decl();
    if (!p.accept_kw("policy"))
        throw ParseError("expected 'pred' declaration or 'policy', found " + p.describe(p.peek()),
                         p.peek().pos);
    FormulaPtr f = p.parse_formula({});
    p.expect_punct(".", "after policy formula");
    if (p.peek().kind != TokKind::End)
        throw ParseError("unexpected input after policy: " + p.describe(p.peek()), p.peek().pos);
    return PolicyDocument{std::move(p.preds), std::move(f)};
}

FormulaPtr parse_formula_text(const std::string& text, const PredTable& preds, const Registry& reg) {
    Parser p{reg, lex(text), 0, {}};
    p.preds = preds;
    FormulaPtr f = p.parse_formula({});
    if (p.peek().kind != TokKind::End)
        throw ParseError("unexpected input after formula: " + p.describe(p.peek()), p.peek().pos);
    return f;
}

std::string format_policy(const PolicyDocument& doc) {
    std::string out;
    for (const auto& d : doc.preds) {
        out += "pred " + d.name;
        if (!d.arg_sorts.empty()) {
            out += "(";
            for (size_t i = 0; i < d.arg_sorts.size(); ++i)
                out += std::string(i ? ", " : "") + sort_name(d.arg_sorts[i]);
            out += ")";
        }
        out += ".\n";
    }
    out += "policy " + format_formula(*doc.policy) + ".\n";
    return out;
}

// ── History files ────────────────────────────────────────────────────────

namespace {

using json = nlohmann::json;

bool plain_decimal(const std::string& s) {
    size_t k = s.size() && s[0] == '-' ? 1 : 0;
    if (k == s.size()) return false;
    for (; k < s.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
    return true;
}

Sort sort_from_name(const std::string& n, const std::string& where) {
    if (n == "Int") return Sort::Int;
    if (n == "Rat") return Sort::Rat;
    if (n == "Str") return Sort::Str;
    throw ParseError(where + ": unknown sort " + n);
}

POArg parse_arg(const json& a, const std::string& where, GroundMode mode) {
    if (a.is_number_integer() || a.is_number_unsigned()) {
        return Value::integer(mpz_class(a.dump()));
    }
    if (a.is_number_float())
        throw ParseError(where + ": non-integer number; use {\"rat\": \"n/d\"} for rationals");
    if (a.is_string()) return Value::text(a.get<std::string>());
    if (a.is_object()) {
        if (a.contains("int")) {
            if (!a["int"].is_string() || !plain_decimal(a["int"].get<std::string>()))
                throw ParseError(where + ": \"int\" takes a decimal string");
            return Value::integer(mpz_class(a["int"].get<std::string>()));
        }
        if (a.contains("rat")) {
            if (!a["rat"].is_string()) throw ParseError(where + ": \"rat\" takes a string \"n/d\"");
            mpq_class q;
            if (q.set_str(a["rat"].get<std::string>(), 10) != 0)
                throw ParseError(where + ": malformed rational " + a["rat"].get<std::string>());
            if (q.get_den() == 0) throw ParseError(where + ": rational with zero denominator");
            return Value::rational(std::move(q));
        }
        if (a.contains("var")) {
            if (mode == GroundMode::Require)
                throw ParseError(where + ": unknowns are not allowed here; a ground history is required");
            if (!a["var"].is_string() || a["var"].get<std::string>().empty())
                throw ParseError(where + ": \"var\" takes a non-empty name");
            if (!a.contains("sort") || !a["sort"].is_string())
                throw ParseError(where + ": unknown " + a["var"].get<std::string>() +
                                 " needs a \"sort\" field");
            return HistVar{a["var"].get<std::string>(),
                           sort_from_name(a["sort"].get<std::string>(), where)};
        }
    }
    throw ParseError(where + ": malformed argument " + a.dump());
}

POEvent parse_event(const json& e, const PredTable* preds,
                    std::map<std::string, std::vector<Sort>>& inferred, const std::string& where,
                    GroundMode mode) {
    if (!e.is_object() || !e.contains("pred") || !e["pred"].is_string())
        throw ParseError(where + ": an event is an object with \"pred\" and \"args\"");
    POEvent out;
    out.pred = e["pred"].get<std::string>();
    if (e.contains("args")) {
        if (!e["args"].is_array()) throw ParseError(where + ": \"args\" must be an array");
        size_t k = 0;
        for (const auto& a : e["args"]) out.args.push_back(parse_arg(a, where + ", " + out.pred + " argument " + std::to_string(++k), mode));
    }

    auto sort_of = [](const POArg& a) {
        if (const auto* v = std::get_if<Value>(&a)) return v->sort();
        return std::get<HistVar>(a).sort;
    };
    if (preds) {
        const PredDecl* d = find_pred(*preds, out.pred);
        if (!d) throw ParseError(where + ": predicate " + out.pred + " is not declared by the policy");
        if (d->arg_sorts.size() != out.args.size())
            throw ParseError(where + ": " + out.pred + " takes " + std::to_string(d->arg_sorts.size()) +
                             " arguments, got " + std::to_string(out.args.size()));
        for (size_t i = 0; i < out.args.size(); ++i)
            if (sort_of(out.args[i]) != d->arg_sorts[i])
                throw ParseError(where + ": argument " + std::to_string(i + 1) + " of " + out.pred +
                                 " has sort " + sort_name(sort_of(out.args[i])) + ", expected " +
                                 sort_name(d->arg_sorts[i]));
    } else {
        std::vector<Sort> sorts;
        for (const auto& a : out.args) sorts.push_back(sort_of(a));
        auto [it, inserted] = inferred.emplace(out.pred, sorts);
        if (!inserted && it->second != sorts)
            throw ParseError(where + ": predicate " + out.pred +
                             " used at inconsistent arities or sorts across the file");
    }
    return out;
}

json parse_json_or_raise(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

void check_unknown_sorts(const POHistory& h) {
    try {
        h.variables();
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
}

} // namespace

POHistory parse_history(const std::string& text, const PredTable* preds, GroundMode mode) {
    json doc = parse_json_or_raise(text);
    if (!doc.is_object() || !doc.contains("sessions") || !doc["sessions"].is_array())
        throw ParseError("a history file is an object {\"sessions\": [[event, ...], ...]}");
    std::map<std::string, std::vector<Sort>> inferred;
    std::vector<POSession> sessions;
    int si = 0;
    for (const auto& s : doc["sessions"]) {
        ++si;
        std::string where = "session " + std::to_string(si);
        if (!s.is_array()) throw ParseError(where + ": a session is an array of events");
        std::vector<POEvent> events;
        for (const auto& e : s) events.push_back(parse_event(e, preds, inferred, where, mode));
        sessions.push_back(POSession::of(std::move(events)));
    }
    POHistory h(std::move(sessions));
    check_unknown_sorts(h);
    return h;
}

POSession parse_session_json(const std::string& text, const PredTable* preds, GroundMode mode) {
    json doc = parse_json_or_raise(text);
    if (!doc.is_array()) throw ParseError("a session is a JSON array of events");
    std::map<std::string, std::vector<Sort>> inferred;
    std::vector<POEvent> events;
    for (const auto& e : doc) events.push_back(parse_event(e, preds, inferred, "session", mode));
    return POSession::of(std::move(events));
}

std::string write_history(const POHistory& h) {
    nlohmann::ordered_json out;
    out["sessions"] = nlohmann::ordered_json::array();
    for (const auto& s : h.sessions()) {
        nlohmann::ordered_json js = nlohmann::ordered_json::array();
        for (const auto& e : s.events()) {
            nlohmann::ordered_json je;
            je["pred"] = e.pred;
            je["args"] = nlohmann::ordered_json::array();
            for (const auto& a : e.args) {
                if (const auto* v = std::get_if<Value>(&a)) {
                    switch (v->sort()) {
                    case Sort::Int:
                        if (v->as_int().fits_slong_p())
                            je["args"].push_back(v->as_int().get_si());
                        else
                            je["args"].push_back({{"int", v->as_int().get_str()}});
                        break;
                    case Sort::Rat: je["args"].push_back({{"rat", v->as_rat().get_str()}}); break;
                    case Sort::Str: je["args"].push_back(v->as_str()); break;
                    }
                } else {
                    const auto& hv = std::get<HistVar>(a);
                    je["args"].push_back({{"var", hv.name}, {"sort", sort_name(hv.sort)}});
                }
            }
            js.push_back(std::move(je));
        }
        out["sessions"].push_back(std::move(js));
    }
    return out.dump(2) + "\n";
}

} // namespace histmon
