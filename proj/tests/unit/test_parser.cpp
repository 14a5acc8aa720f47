#include <doctest.h>

#include <string>
#include <vector>

#include "histmon/errors.hpp"
#include "histmon/format.hpp"
#include "histmon/parser.hpp"

using namespace histmon;

TEST_SUITE("parser") {

static const char* kSig =
    "pred p(Int). pred q(Int, Int). pred r(Str). pred b.\n";

static FormulaPtr parse1(const std::string& formula) {
    auto doc = parse_policy(std::string(kSig) + "policy " + formula + ".");
    return doc.policy;
}

static std::string canon(const std::string& formula) {
    return format_formula(*parse1(formula));
}

TEST_CASE("format is a fixed point of parsing") {
    std::vector<std::string> policies = {
        "true",
        "! prev true",
        "p(1) & q(2, 3) | b",
        "b -> b -> false",
        "once b since (! b)",
        "historically (forall (x):p. exists (y, z):q. x = y & z <= 2)",
        "count n : b . count m : true . n / m <= 1 / 2",
        "forall (x, y):q(x, y) . p(x + y)",
        "exists (s):r(s) since r(s) . r(s)",
        "p(2 * (3 + 4) - -5)",
    };
    for (const auto& text : policies) {
        CAPTURE(text);
        auto once = canon(text);
        CHECK(format_formula(*parse1(once)) == once);
    }
}

TEST_CASE("operator precedence and associativity") {
    // & binds tighter than |, | tighter than ->, -> is right associative.
    CHECK(canon("p(1) & q(1, 1) | b") == canon("(p(1) & q(1, 1)) | b"));
    CHECK(canon("b | p(1) & q(1, 1)") == canon("b | (p(1) & q(1, 1))"));
    CHECK(canon("b -> b -> b") == canon("b -> (b -> b)"));
    CHECK(canon("b -> b -> b") != canon("(b -> b) -> b"));

    // since binds tighter than the unary operators and is right associative;
    // a negated operand needs parentheses.
    CHECK(canon("! b since b") == canon("! (b since b)"));
    CHECK(canon("! b since b") != canon("(! b) since b"));
    CHECK(canon("b since b since b") == canon("b since (b since b)"));
    CHECK(canon("once b since b") == canon("once (b since b)"));

    // Quantifier and count bodies extend as far right as possible.
    CHECK(canon("forall (x):p. p(x) & b") == canon("forall (x):p. (p(x) & b)"));
    CHECK(canon("count n : b . n <= 1 | b") == canon("count n : b . (n <= 1 | b)"));

    // Arithmetic: * over +, unary minus, parenthesised grouping.
    CHECK(canon("p(1 + 2 * 3)") == canon("p(1 + (2 * 3))"));
    CHECK(canon("p((1 + 2) * 3)") != canon("p(1 + 2 * 3)"));
    CHECK(canon("p(-2 + 1)") == canon("p((-2) + 1)"));
}

TEST_CASE("comments and layout are ignored") {
    auto doc = parse_policy(
        "# leading comment\n"
        "pred p(Int).  # trailing\n"
        "pred b.\n"
        "policy  # mid\n"
        "  p(1)\n"
        "  & b.\n");
    CHECK(format_formula(*doc.policy) == "p(1) & b");
    CHECK(doc.preds.size() == 2);
}

TEST_CASE("declarations are checked against use") {
    CHECK_THROWS_WITH_AS((void)parse1("z(1)"), doctest::Contains("unknown symbol"), ParseError);
    CHECK_THROWS_WITH_AS((void)parse1("p(1, 2)"), doctest::Contains("takes"), ParseError);
    CHECK_THROWS_AS((void)parse1("p(\"s\")"), SortError);
    CHECK_THROWS_AS((void)parse1("r(1)"), SortError);
    // Relations need compatible sorts at parse time.
    CHECK_THROWS_AS((void)parse1("forall (s):r. s <= 2"), SortError);
    // Unknown relation name.
    CHECK_THROWS_WITH_AS((void)parse1("1 ~ 2"), doctest::Contains("~"), ParseError);
}

TEST_CASE("malformed policies are rejected with positions") {
    auto bad = [](const std::string& text) {
        return [text] { (void)parse_policy(text); };
    };
    CHECK_THROWS_AS(bad("policy (true.")(), ParseError);
    CHECK_THROWS_AS(bad("policy .")(), ParseError);
    CHECK_THROWS_AS(bad("pred p(Int). policy p(1)")(), ParseError); // missing final dot
    CHECK_THROWS_AS(bad("pred p(Frob). policy true.")(), ParseError);
    CHECK_THROWS_AS(bad("pred p(Int). pred p(Int). policy true.")(), ParseError);
    CHECK_THROWS_AS(bad("policy true. trailing")(), ParseError);
    try {
        (void)parse_policy("pred p(Int).\npolicy p(1) &.\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("2:") != std::string::npos); // line number
    }
}

TEST_CASE("unbound variables have no reading as policies") {
    CHECK_THROWS_WITH_AS((void)parse1("p(x)"), doctest::Contains("unknown symbol"), ParseError);
}

TEST_CASE("quantifiers take a bare predicate or a guard") {
    auto plain = parse1("forall (x):p. true");
    CHECK(plain->kind == FormulaKind::ForallP);
    CHECK(plain->vars.size() == 1);
    CHECK(plain->vars[0].sort == Sort::Int);

    auto guarded = parse1("forall (x, y):q(x, y) & p(x) . x <= y");
    CHECK(guarded->kind == FormulaKind::ForallG);

    auto neg = parse1("exists (x):p. p(x)");
    CHECK(neg->kind == FormulaKind::Not); // sugar over ForallP

    // Binder count must match the predicate's arity...
    CHECK_THROWS_AS((void)parse1("forall (x):q. true"), ParseError);
    // ...and every binder must appear in the guard.
    CHECK_THROWS_AS((void)parse1("forall (x, y):p(x) . x <= y"), ParseError);
    // Guard variables beyond the binders are rejected too.
    CHECK_THROWS_AS((void)parse1("forall (x):q(x, y) . true"), ParseError);
    // Duplicate binders are ambiguous.
    CHECK_THROWS_AS((void)parse1("forall (x, x):q. true"), ParseError);
}

TEST_CASE("histories parse and write back") {
    auto doc = parse_policy(std::string(kSig) + "policy true.");
    const std::string text = R"({
      "sessions": [
        [ {"pred": "p", "args": [1]},
          {"pred": "q", "args": [{"int": "-12"}, 3]} ],
        [ {"pred": "r", "args": ["a\"b"]},
          {"pred": "b"} ],
        []
      ]
    })";
    auto h = parse_history(text, &doc.preds, GroundMode::Require);
    CHECK(h.size() == 3);
    CHECK(h.ground());
    auto ground = *h.to_ground();
    CHECK(ground.at(1).contains(Event{"q", {Value::integer(-12), Value::integer(3)}}));
    CHECK(ground.at(2).contains(Event{"r", {Value::text("a\"b")}}));
    CHECK(ground.at(3).events().empty());

    // write_history round-trips, including unknowns.
    const std::string po = R"({"sessions": [[
        {"pred": "p", "args": [{"var": "N", "sort": "Int"}]},
        {"pred": "q", "args": [2, {"int": "99999999999999999999"}]}
    ]]})";
    auto hv = parse_history(po, &doc.preds, GroundMode::Allow);
    CHECK(hv.variables().size() == 1);
    auto again = parse_history(write_history(hv), &doc.preds, GroundMode::Allow);
    CHECK(write_history(again) == write_history(hv));
    CHECK(again.variables() == hv.variables());
}

TEST_CASE("history validation failures name the offending session") {
    auto doc = parse_policy(std::string(kSig) + "policy true.");
    auto reject = [&](const std::string& text, GroundMode mode = GroundMode::Require) {
        return [&doc, text, mode] { (void)parse_history(text, &doc.preds, mode); };
    };
    CHECK_THROWS_AS(reject("{}")(), ParseError);
    CHECK_THROWS_AS(reject(R"({"sessions": [[{"pred": "zz", "args": []}]]})")(), ParseError);
    CHECK_THROWS_AS(reject(R"({"sessions": [[{"pred": "p", "args": [1, 2]}]]})")(), ParseError);
    CHECK_THROWS_WITH_AS(reject(R"({"sessions": [[{"pred": "p", "args": ["s"]}]]})")(),
                         doctest::Contains("expected Int"), ParseError);
    CHECK_THROWS_AS(reject(R"({"sessions": [[{"pred": "p", "args": [1.5]}]]})")(), ParseError);
    CHECK_THROWS_AS(
        reject(R"({"sessions": [[{"pred": "p", "args": [{"var": "N", "sort": "Int"}]}]]})")(),
        ParseError); // unknowns rejected in Require mode
    CHECK_THROWS_AS(reject(R"({"sessions": [[{"pred": "p", "args": [{"rat": "x"}]}]]})")(),
                    ParseError);
    try {
        reject(R"({"sessions": [[], [{"pred": "zz"}]]})")();
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("session 2") != std::string::npos);
    }

    // Without declarations, arity and names are free-form but arguments
    // still need valid encodings.
    auto h = parse_history(R"({"sessions": [[{"pred": "zz", "args": [{"rat": "2/4"}]}]]})",
                           nullptr, GroundMode::Require);
    CHECK(h.to_ground()->at(1).contains(Event{"zz", {Value::rational(1, 2)}}));
}

TEST_CASE("single sessions parse for appending") {
    auto doc = parse_policy(std::string(kSig) + "policy true.");
    auto s = parse_session_json(R"([{"pred": "p", "args": [4]}, {"pred": "b"}])",
                                &doc.preds, GroundMode::Require);
    CHECK(s.events().size() == 2);
    CHECK_THROWS_AS(
        (void)parse_session_json(R"([{"pred": "nope"}])", &doc.preds, GroundMode::Require),
        ParseError);
}

TEST_CASE("formula text helper shares the declaration table") {
    auto doc = parse_policy(std::string(kSig) + "policy true.");
    auto f = parse_formula_text("exists (s):r. r(s)", doc.preds);
    CHECK(is_closed(*f));
    CHECK_THROWS_AS((void)parse_formula_text("p(x)", doc.preds), ParseError);
}

} // TEST_SUITE("parser")
