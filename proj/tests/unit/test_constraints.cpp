#include <doctest.h>

#include <fstream>
#include <sstream>

#include "histmon/constraints.hpp"
#include "histmon/errors.hpp"
#include "histmon/testkit.hpp"

using namespace histmon;
using namespace histmon::constraints;

TEST_SUITE("constraints") {

static Lin lv(const char* n, long c = 1) { return lin_var(n, c); }

static std::string slurp(const std::string& name) {
    std::ifstream in(std::string(HISTMON_GOLDEN_DIR) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

TEST_CASE("linear combinations normalize") {
    Lin l = lv("x", 2);
    l.add(lv("y", -1));
    l.add(lin_const(5));
    CHECK(l.to_string() == "2*x - y + 5");
    l.add(lv("y"));               // y cancels out of the map entirely
    CHECK(l.coeff.count("y") == 0);
    CHECK(l.negated().to_string() == "-2*x - 5");
    Lin twice = lv("x");
    twice.add(lv("x"));
    CHECK(twice.coeff.at("x") == 2);
    CHECK(lin_const(0).to_string() == "0");
}

TEST_CASE("constructors fold ground and trivial structure") {
    CHECK(c_int(lin_const(0), IntRel::Eq)->kind == CKind::Top);
    CHECK(c_int(lin_const(3), IntRel::Eq)->kind == CKind::Bot);
    CHECK(c_int(lin_const(-2), IntRel::Le)->kind == CKind::Top);
    CHECK(c_int(lin_const(-2), IntRel::Ge)->kind == CKind::Bot);

    auto atom = c_int(lv("x"), IntRel::Le);
    CHECK(c_and(atom, c_top()) == atom);
    CHECK(c_and(atom, c_bot())->kind == CKind::Bot);
    CHECK(c_or(atom, c_top())->kind == CKind::Top);
    CHECK(c_or(c_bot(), atom) == atom);
    CHECK(c_not(c_not(atom)) == atom);
    CHECK(c_not(c_top())->kind == CKind::Bot);

    CHECK(c_sym_eq(Value::text("a"), Value::text("a"), Sort::Str)->kind == CKind::Top);
    CHECK(c_sym_eq(Value::text("a"), Value::text("b"), Sort::Str)->kind == CKind::Bot);
    CHECK(c_sym_eq(std::string("S"), std::string("S"), Sort::Str)->kind == CKind::Top);

    auto sym = c_sym_eq(std::string("S"), Value::text("a"), Sort::Str);
    CHECK(node_count(c_or(sym, sym)) == 3);
}

TEST_CASE("rendering moves the constant to the right-hand side") {
    Lin l = lv("x", 2);
    l.add(lv("y", -1));
    l.add(lin_const(5));
    CHECK(to_text(c_int(l, IntRel::Le)) == "2*x - y <= -5");
    Lin xx = lv("x");
    xx.add(lv("x"));
    xx.add(lin_const(-1));
    CHECK(to_text(c_int(xx, IntRel::Eq)) == "2*x = 1");
    auto sym = c_sym_eq(std::string("S"), Value::text("a"), Sort::Str);
    auto other = c_sym_eq(std::string("S"), std::string("T"), Sort::Str);
    CHECK(to_text(c_or(c_and(sym, other), c_not(sym))) ==
          "((S = \"a\" & S = T) | !S = \"a\")");
    CHECK(to_text(c_top()) == "true");
    CHECK(to_text(c_bot()) == "false");
}

TEST_CASE("smtlib output matches the goldens") {
    Lin x = lv("x");
    auto int_only = c_and(c_not(c_int(x, IntRel::Eq)), c_int(x, IntRel::Le));
    CHECK(to_smtlib(int_only) == slurp("int_only.smt2"));

    auto sym = c_sym_eq(std::string("S"), Value::text("a"), Sort::Str);
    auto other = c_sym_eq(std::string("S"), std::string("T"), Sort::Str);
    Lin mix = lv("n", 3);
    mix.add(lin_const(-7));
    auto mixed = c_and(c_int(mix, IntRel::Ge),
                       c_and(c_sym_eq(std::string("R"), Value::rational(1, 2), Sort::Rat),
                             c_or(c_and(sym, other), c_not(sym))));
    CHECK(to_smtlib(mixed) == slurp("mixed_sorts.smt2"));

    auto ab = c_or(c_sym_eq(std::string("S"), Value::text("a"), Sort::Str),
                   c_sym_eq(std::string("S"), Value::text("b"), Sort::Str));
    CHECK(to_smtlib(ab) == slurp("distinct_constants.smt2"));
}

TEST_CASE("variable maps reject cross-sort reuse") {
    auto c = c_and(c_int(lv("v"), IntRel::Eq),
                   c_sym_eq(std::string("w"), Value::text("a"), Sort::Str));
    auto vars = variables(c);
    CHECK(vars.at("v") == Sort::Int);
    CHECK(vars.at("w") == Sort::Str);

    auto bad = c_and(c_int(lv("v"), IntRel::Eq),
                     c_sym_eq(std::string("v"), Value::text("a"), Sort::Str));
    CHECK_THROWS_AS((void)variables(bad), Error);
}

TEST_CASE("doubled variables make odd sums unsatisfiable") {
    Lin xx = lv("x");
    xx.add(lv("x"));
    xx.add(lin_const(-1)); // x + x = 1
    auto r = satisfiable(c_int(xx, IntRel::Eq));
    CHECK(r.verdict == SatVerdict::Unsat);

    Lin even = lv("x", 2);
    even.add(lin_const(-4)); // 2x = 4
    auto r2 = satisfiable(c_int(even, IntRel::Eq));
    REQUIRE(r2.verdict == SatVerdict::Sat);
    CHECK(*r2.model->lookup("x") == Value::integer(2));
}

TEST_CASE("sat models are deterministic and verified") {
    Lin x = lv("x");
    auto c = c_and(c_not(c_int(x, IntRel::Eq)), c_int(x, IntRel::Le));
    auto r = satisfiable(c);
    REQUIRE(r.verdict == SatVerdict::Sat);
    REQUIRE(r.model.has_value());
    CHECK(*r.model->lookup("x") == Value::integer(-1));
    CHECK(evaluate(c, *r.model));

    // Unbound sym classes take fresh values outside the formula constants.
    auto fresh = satisfiable(c_not(c_sym_eq(std::string("S"), Value::text("a"), Sort::Str)));
    REQUIRE(fresh.verdict == SatVerdict::Sat);
    CHECK(*fresh.model->lookup("S") == Value::text("u0"));

    // Equality chains propagate and clash on distinct constants.
    auto chain = c_and(c_sym_eq(std::string("S"), std::string("T"), Sort::Str),
                       c_and(c_sym_eq(std::string("T"), Value::text("a"), Sort::Str),
                             c_sym_eq(std::string("S"), Value::text("b"), Sort::Str)));
    CHECK(satisfiable(chain).verdict == SatVerdict::Unsat);

    // Mixed systems solve both parts and the model covers every variable.
    Lin sum = lv("u");
    sum.add(lv("v"));
    sum.add(lin_const(-7)); // u + v = 7
    Lin ub = lv("u");
    ub.add(lin_const(-3)); // u <= 3
    auto mixed = c_and(c_int(sum, IntRel::Eq),
                       c_and(c_int(ub, IntRel::Le),
                             c_sym_eq(std::string("R"), Value::rational(2, 3), Sort::Rat)));
    auto rm = satisfiable(mixed);
    REQUIRE(rm.verdict == SatVerdict::Sat);
    CHECK(rm.model->size() == 3);
    CHECK(evaluate(mixed, *rm.model));
    CHECK(*rm.model->lookup("R") == Value::rational(2, 3));
}

TEST_CASE("evaluate demands a total model") {
    auto c = c_int(lv("x"), IntRel::Ge);
    Substitution m;
    CHECK_THROWS_AS((void)evaluate(c, m), Error);
    m.bind("x", Value::integer(0));
    CHECK(evaluate(c, m));
    m.bind("x", Value::integer(-2));
    CHECK(!evaluate(c, m));
}

TEST_CASE("budget exhaustion reports unknown, never a verdict") {
    Lin xx = lv("x");
    xx.add(lv("x"));
    xx.add(lin_const(-1));
    auto infeasible = c_int(xx, IntRel::Eq);
    auto feasible = c_int(lv("x"), IntRel::Eq);

    Budget one_branch;
    one_branch.branches = 1;
    auto r = satisfiable(c_or(infeasible, feasible), one_branch);
    CHECK(r.verdict == SatVerdict::Unknown);
    CHECK(r.reason == "budget: too many branches");

    Budget one_derived;
    one_derived.derived = 1;
    Lin a = lv("x");
    a.add(lv("y"));
    Lin b = lv("x", -1);
    b.add(lv("y", 2));
    auto conj = c_and(c_int(a, IntRel::Le),
                      c_and(c_int(b, IntRel::Le), c_int(lv("y", -1), IntRel::Le)));
    auto r2 = satisfiable(conj, one_derived);
    CHECK(r2.verdict == SatVerdict::Unknown);
    CHECK(r2.reason == "budget: too many derived constraints");
}

TEST_CASE("verdicts agree with brute force on random constraints") {
    testkit::Rng rng(7301);
    int sat = 0, unsat = 0;
    for (int t = 0; t < 200; ++t) {
        auto c = testkit::random_constraint(rng, 3, 4);
        auto got = satisfiable(c);
        bool want = testkit::brute_force_sat(c, -12, 12);
        if (got.verdict == SatVerdict::Unknown) {
            CAPTURE(to_text(c));
            FAIL("solver gave up on a bounded instance");
        }
        bool is_sat = got.verdict == SatVerdict::Sat;
        if (is_sat != want) CAPTURE(to_text(c));
        CHECK(is_sat == want);
        if (is_sat) {
            CHECK(evaluate(c, *got.model));
            ++sat;
        } else {
            ++unsat;
        }
    }
    CHECK(sat > 20);
    CHECK(unsat > 20);
}

} // TEST_SUITE("constraints")
