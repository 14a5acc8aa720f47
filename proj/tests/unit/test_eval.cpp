#include <doctest.h>

#include <string>

#include "histmon/errors.hpp"
#include "histmon/eval.hpp"
#include "histmon/format.hpp"
#include "histmon/parser.hpp"
#include "histmon/testkit.hpp"

using namespace histmon;

TEST_SUITE("eval") {

static Value I(long n) { return Value::integer(n); }

// p(n) marks a session; histories here are bitstrings over p(1).
static History bits(std::initializer_list<int> pattern) {
    std::vector<Session> ss;
    for (int on : pattern)
        ss.push_back(on ? Session::of({Event{"p", {I(1)}}}) : Session());
    return History(std::move(ss));
}

static const PredTable kPreds = testkit::test_signature();

static bool holds(const History& h, int i, const std::string& text) {
    auto f = parse_formula_text(text, kPreds);
    return eval::eval_at(h, i, f, Registry::builtins()).value;
}

TEST_CASE("prev looks one session back and fails at the start") {
    auto h = bits({1, 0, 1});
    CHECK(!holds(h, 1, "prev p(1)"));
    CHECK(!holds(h, 1, "prev true")); // even of a tautology
    CHECK(holds(h, 2, "prev p(1)"));
    CHECK(!holds(h, 3, "prev p(1)"));
    CHECK(holds(h, 3, "prev prev p(1)"));
}

TEST_CASE("since demands an anchor and continuity after it") {
    History h({
        Session::of({Event{"q", {I(1), I(1)}}}),
        Session::of({Event{"p", {I(1)}}}),
        Session::of({Event{"p", {I(1)}}}),
        Session::of({Event{"p", {I(1)}}}),
        Session(),
    });
    // An anchor at the current session needs no continuity at all.
    CHECK(holds(h, 1, "p(1) since q(1, 1)"));
    CHECK(holds(h, 2, "false since p(1)"));
    // Remote anchor: the left side must hold on every session after it.
    CHECK(holds(h, 4, "p(1) since q(1, 1)"));
    CHECK(!holds(h, 5, "p(1) since q(1, 1)")); // continuity breaks at 5
    CHECK(holds(h, 5, "true since q(1, 1)"));
    // No anchor anywhere: false even if the left side always holds.
    CHECK(!holds(h, 5, "true since r(\"x\")"));
    CHECK(!holds(bits({0, 0}), 2, "true since p(1)"));
}

TEST_CASE("once and historically are since sugar") {
    auto h = bits({1, 0, 0});
    CHECK(holds(h, 3, "once p(1)"));
    CHECK(!holds(h, 3, "once q(1, 1)"));
    CHECK(holds(h, 1, "historically p(1)"));
    CHECK(!holds(h, 3, "historically p(1)"));
    CHECK(holds(bits({1, 1, 1}), 3, "historically p(1)"));
}

TEST_CASE("event quantifiers range over the current session only") {
    History h({
        Session::of({Event{"q", {I(1), I(2)}}, Event{"q", {I(2), I(2)}}}),
        Session::of({Event{"q", {I(5), I(5)}}}),
    });
    CHECK(holds(h, 1, "forall (x, y):q. y = 2"));
    CHECK(!holds(h, 1, "forall (x, y):q. x = y"));
    CHECK(holds(h, 2, "forall (x, y):q. x = y"));
    CHECK(holds(h, 1, "exists (x, y):q. x = y"));
    CHECK(!holds(h, 2, "exists (x, y):q. x = 1"));
    // vacuous on sessions without matching events
    CHECK(holds(h, 2, "forall (x):p. false"));
    CHECK(!holds(h, 2, "exists (x):p. true"));
    // outer bindings are visible inside
    CHECK(holds(h, 1, "forall (x, y):q. exists (u, v):q. u = y"));
}

TEST_CASE("count counts satisfying past sessions including the present") {
    auto h = bits({1, 0, 1, 1});
    CHECK(holds(h, 4, "count n : p(1) . n = 3"));
    CHECK(holds(h, 2, "count n : p(1) . n = 1"));
    CHECK(holds(h, 1, "count n : ! p(1) . n = 0"));
    // nested counts: sessions with p among all sessions
    CHECK(holds(h, 4, "count n : p(1) . count m : true . n / m = 3 / 4"));
    CHECK(!holds(h, 3, "count n : p(1) . count m : true . n / m <= 1 / 2"));
    // the counted formula may itself look at the past
    CHECK(holds(h, 3, "count n : prev p(1) . n = 1"));
}

TEST_CASE("count y of true equals the session index") {
    testkit::Rng rng(7001);
    for (int t = 0; t < 20; ++t) {
        auto h = testkit::random_history(rng, rng.range(1, 6), 3);
        for (int i = 1; i <= h.size(); ++i) {
            auto f = f_count({"y", Sort::Int},
                             f_true(),
                             f_rel("=", {t_var("y", Sort::Int), t_const(I(i))}));
            CHECK(eval::eval_at(h, i, f, Registry::builtins()).value);
        }
    }
}

TEST_CASE("evaluation agrees with the reference evaluator everywhere") {
    testkit::Rng rng(7002);
    int checked = 0;
    for (int t = 0; t < 200; ++t) {
        auto h = testkit::random_history(rng, rng.range(1, 5), 3);
        auto f = testkit::random_formula(rng, 4, true, true);
        for (int i = 1; i <= h.size(); ++i) {
            bool fast = eval::eval_at(h, i, f, Registry::builtins()).value;
            bool slow = testkit::oracle_eval(h, i, f);
            if (fast != slow) {
                CAPTURE(i);
                CAPTURE(format_formula(*f));
                REQUIRE(fast == slow);
            }
            ++checked;
        }
    }
    CHECK(checked > 200);
}

TEST_CASE("traces explain the verdict") {
    auto h = bits({1, 0});
    auto f = parse_formula_text("once p(1) & ! p(1)", kPreds);
    eval::Options opts;
    opts.build_trace = true;
    auto v = eval::check(h, f, Registry::builtins(), opts);
    REQUIRE(v.value);
    REQUIRE(v.trace != nullptr);
    auto text = eval::render_trace(*v.trace);
    CHECK(text.find("once") != std::string::npos);
    CHECK(text.find("@2") != std::string::npos);

    // A short-circuited conjunction explains one child; the full trace both.
    auto g = parse_formula_text("p(1) & p(1)", kPreds);
    auto lazy = eval::eval_at(h, 2, g, Registry::builtins(), opts);
    CHECK(!lazy.value);
    REQUIRE(lazy.trace);
    CHECK(lazy.trace->children.size() == 1);
    opts.full_trace = true;
    auto full = eval::eval_at(h, 2, g, Registry::builtins(), opts);
    REQUIRE(full.trace);
    CHECK(full.trace->children.size() == 2);
}

TEST_CASE("empty histories and bad indices are rejected") {
    auto f = parse_formula_text("true", kPreds);
    CHECK_THROWS_AS((void)eval::check(History(), f, Registry::builtins()), EmptyHistoryError);
    auto h = bits({1});
    CHECK_THROWS_AS((void)eval::eval_at(h, 0, f, Registry::builtins()), Error);
    CHECK_THROWS_AS((void)eval::eval_at(h, 2, f, Registry::builtins()), Error);
}

TEST_CASE("free variables surface as evaluation errors") {
    auto f = f_rel("=", {t_var("loose", Sort::Int), t_const(I(1))});
    auto h = bits({1});
    CHECK_THROWS_AS((void)eval::eval_at(h, 1, f, Registry::builtins()), EvalError);
}

} // TEST_SUITE("eval")
