// Scenario checks for the policy engine, one per shipped guarantee. Each
// check prints a single [PASS]/[FAIL] line; the exit code is the number of
// failures. Seeds and time limits are fixed here so runs are reproducible.
//
//   acceptance           runs everything
//   acceptance --only N  runs check N alone

#include <algorithm>
#include <chrono>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "histmon/constraints.hpp"
#include "histmon/dp.hpp"
#include "histmon/eval.hpp"
#include "histmon/format.hpp"
#include "histmon/guards.hpp"
#include "histmon/parser.hpp"
#include "histmon/partial.hpp"
#include "histmon/testkit.hpp"

using namespace histmon;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void enforce_limit(Outcome& o, Clock::time_point start, double limit) {
    double s = seconds_since(start);
    std::ostringstream t;
    t.precision(2);
    t << std::fixed << s << "s";
    if (s > limit) o.fail("exceeded the " + std::to_string(int(limit)) + "s time limit at " + t.str());
    if (!o.detail.empty()) o.detail += ", ";
    o.detail += t.str();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw Error("cannot read " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

PolicyDocument load_policy(const std::string& name) {
    return parse_policy(slurp(std::string(HISTMON_CORPUS_DIR) + "/" + name));
}

History load_history(const std::string& name, const PredTable& preds) {
    auto po = parse_history(slurp(std::string(HISTMON_CORPUS_DIR) + "/" + name), &preds,
                            GroundMode::Require);
    return *po.to_ground();
}

POHistory load_po_history(const std::string& name, const PredTable& preds) {
    return parse_history(slurp(std::string(HISTMON_CORPUS_DIR) + "/" + name), &preds,
                         GroundMode::Allow);
}

// ── 1: corpus verdicts ───────────────────────────────────────────────────

Outcome check_corpus_verdicts() {
    Outcome o;
    auto start = Clock::now();
    struct Row {
        const char* policy;
        const char* history;
        bool expected;
    };
    const Row rows[] = {
        {"one_out_of_k.ptltl", "one_out_of_k_accept_1.hist", true},
        {"one_out_of_k.ptltl", "one_out_of_k_accept_2.hist", true},
        {"one_out_of_k.ptltl", "one_out_of_k_reject_1.hist", false},
        {"one_out_of_k.ptltl", "one_out_of_k_reject_2.hist", false},
        {"chinese_wall.ptltl", "chinese_wall_accept_1.hist", true},
        {"chinese_wall.ptltl", "chinese_wall_accept_2.hist", true},
        {"chinese_wall.ptltl", "chinese_wall_reject_1.hist", false},
        {"chinese_wall.ptltl", "chinese_wall_reject_2.hist", false},
        {"ebay_ontime.ptltl", "ebay_ontime_accept_1.hist", true},
        {"ebay_ontime.ptltl", "ebay_ontime_accept_2.hist", true},
        {"ebay_ontime.ptltl", "ebay_ontime_reject_1.hist", false},
        {"ebay_ontime.ptltl", "ebay_ontime_reject_2.hist", false},
        {"ebay_highvalue.ptltl", "ebay_highvalue_accept_1.hist", true},
        {"ebay_highvalue.ptltl", "ebay_highvalue_accept_2.hist", true},
        {"ebay_highvalue.ptltl", "ebay_highvalue_reject_1.hist", false},
        {"ebay_highvalue.ptltl", "ebay_highvalue_reject_2.hist", false},
    };
    int checked = 0;
    for (const Row& r : rows) {
        auto doc = load_policy(r.policy);
        auto h = load_history(r.history, doc.preds);
        bool direct = eval::check(h, doc.policy, Registry::builtins()).value;
        bool tabled = dp::check_dp(h, doc.policy, Registry::builtins());
        if (direct != r.expected)
            o.fail(std::string(r.history) + ": check returned " + (direct ? "true" : "false"));
        if (tabled != r.expected)
            o.fail(std::string(r.history) + ": table engine returned " + (tabled ? "true" : "false"));
        ++checked;
    }
    o.detail = std::to_string(checked) + " verdicts";
    enforce_limit(o, start, 1.0);
    return o;
}

// ── 2: engine equivalence ────────────────────────────────────────────────

Outcome check_engine_equivalence() {
    Outcome o;
    auto start = Clock::now();
    testkit::Rng rng(11002);
    int mismatches = 0;
    for (int t = 0; t < 1000; ++t) {
        auto h = testkit::random_history(rng, rng.range(1, 6), 4);
        auto f = testkit::random_formula(rng, 5, false, false);
        bool direct = eval::eval_at(h, h.size(), f, Registry::builtins()).value;
        bool tabled = dp::check_dp(h, f, Registry::builtins());
        bool reference = testkit::oracle_eval(h, h.size(), f);
        if (direct != reference || tabled != reference) {
            ++mismatches;
            if (mismatches == 1)
                o.fail("first mismatch on instance " + std::to_string(t) + ": " +
                       format_formula(*f));
        }
    }
    if (mismatches) o.fail(std::to_string(mismatches) + " mismatches in 1000 instances");
    o.detail = "1000 instances";
    enforce_limit(o, start, 30.0);
    return o;
}

// ── 3: quantifier reduction fidelity ─────────────────────────────────────

Outcome check_qbf_fidelity() {
    Outcome o;
    auto start = Clock::now();
    testkit::Rng rng(11003);
    int instances = 0, mismatches = 0;
    for (int nvars = 1; nvars <= 4; ++nvars) {
        for (int prefix = 0; prefix < (1 << nvars); ++prefix) {
            for (int round = 0; round < 7; ++round) {
                testkit::QbfSpec spec;
                spec.nvars = nvars;
                for (int v = 0; v < nvars; ++v) spec.forall.push_back(prefix & (1 << v));
                int nclauses = rng.range(1, 4);
                for (int c = 0; c < nclauses; ++c) {
                    std::vector<int> clause;
                    int width = rng.range(1, 3);
                    for (int l = 0; l < width; ++l) {
                        int var = rng.range(1, nvars);
                        clause.push_back(rng.chance(50) ? var : -var);
                    }
                    spec.clauses.push_back(std::move(clause));
                }
                bool want = testkit::qbf_truth(spec);
                for (auto shape : {testkit::QbfShape::SingleSession, testkit::QbfShape::TraceLike}) {
                    auto enc = testkit::encode_qbf(spec, shape);
                    bool got = eval::check(enc.history, enc.policy, Registry::builtins()).value;
                    ++instances;
                    if (got != want) {
                        ++mismatches;
                        if (mismatches == 1)
                            o.fail(std::string("first mismatch: ") +
                                   (shape == testkit::QbfShape::SingleSession ? "single" : "trace") +
                                   " shape, " + std::to_string(nvars) + " vars");
                    }
                }
            }
        }
    }
    if (mismatches) o.fail(std::to_string(mismatches) + " mismatches");
    if (instances < 200) o.fail("only " + std::to_string(instances) + " instances");
    o.detail = std::to_string(instances) + " instances";
    enforce_limit(o, start, 30.0);
    return o;
}

// ── 4: counting semantics ────────────────────────────────────────────────

Outcome check_counting() {
    Outcome o;
    auto start = Clock::now();
    auto doc = load_policy("feedback_ratio.ptltl");

    // Five-session histories built here: noise plus a controlled number of
    // negative-feedback sessions.
    auto build = [](std::vector<int> negatives) {
        History h;
        for (int j = 1; j <= 5; ++j) {
            std::vector<Event> ev = {
                Event{"pay", {Value::integer(j), Value::text("item"), Value::integer(10 * j)}},
                Event{"post", {Value::text("item"), Value::integer(j)}},
            };
            bool neg = std::find(negatives.begin(), negatives.end(), j) != negatives.end();
            ev.push_back(Event{neg ? "negative" : "positive", {}});
            h.append(Session::of(std::move(ev)));
        }
        return h;
    };
    auto one = build({2});
    auto two = build({2, 4});
    if (!eval::check(one, doc.policy, Registry::builtins()).value)
        o.fail("one negative out of five was rejected");
    if (eval::check(two, doc.policy, Registry::builtins()).value)
        o.fail("two negatives out of five were accepted");

    // The corpus copies of the same construction must agree.
    if (!eval::check(load_history("feedback_ratio_accept_1.hist", doc.preds), doc.policy,
                     Registry::builtins())
             .value)
        o.fail("corpus accept history was rejected");
    if (eval::check(load_history("feedback_ratio_reject_1.hist", doc.preds), doc.policy,
                    Registry::builtins())
            .value)
        o.fail("corpus reject history was accepted");

    // count y : true . y = i holds at every session index of any history.
    testkit::Rng rng(11004);
    int points = 0;
    for (int t = 0; t < 25; ++t) {
        auto h = testkit::random_history(rng, rng.range(1, 6), 3);
        for (int i = 1; i <= h.size(); ++i) {
            auto f = f_count({"y", Sort::Int}, f_true(),
                             f_rel("=", {t_var("y", Sort::Int), t_const(Value::integer(i))}));
            if (!eval::eval_at(h, i, f, Registry::builtins()).value) {
                o.fail("session count mismatch at i=" + std::to_string(i));
                break;
            }
            ++points;
        }
    }
    o.detail = "2 ratio verdicts, " + std::to_string(points) + " index identities";
    enforce_limit(o, start, 1.0);
    return o;
}

// ── 5: partial observability ─────────────────────────────────────────────

Outcome check_partial_observability() {
    Outcome o;
    auto start = Clock::now();

    // The worked pair: an unobserved payment amount.
    auto strict = load_policy("win_pay.ptltl");
    auto relaxed = load_policy("win_pay_or_positive.ptltl");
    auto h = load_po_history("partial_observed.hist", strict.preds);

    auto sat = partial::psat(h, strict.policy);
    if (!sat.holds) o.fail("psat rejected the strict policy");
    if (!sat.witness) {
        o.fail("psat returned no witness");
    } else {
        auto ground = h.substitute(*sat.witness);
        if (!eval::check(ground, strict.policy, Registry::builtins()).value)
            o.fail("psat witness fails ground evaluation");
    }
    auto adh = partial::adhere(h, strict.policy);
    if (adh.holds) o.fail("adherence accepted the strict policy");
    if (adh.witness) {
        auto ground = h.substitute(*adh.witness);
        if (eval::check(ground, strict.policy, Registry::builtins()).value)
            o.fail("adherence counterexample actually complies");
    } else {
        o.fail("adherence returned no counterexample");
    }
    if (!partial::adhere(h, relaxed.policy).holds)
        o.fail("adherence rejected the relaxed policy");

    // Random agreement with bounded enumeration. psat_bounded over a box is
    // one-sided: a bounded hit forces psat; a psat witness whose integer
    // part lies inside the box forces a bounded hit.
    testkit::Rng rng(11005);
    const long lo = -10, hi = 10;
    int done = 0, violations = 0, positive = 0;
    while (done < 300) {
        auto ground = testkit::random_history(rng, rng.range(1, 4), 3);
        auto po = testkit::random_po_instance(rng, ground, 30);
        if (po.variables().size() > 3) continue; // keep enumeration tractable
        auto f = testkit::random_formula(rng, 3, false, false);
        ++done;

        partial::CheckResult got;
        try {
            got = partial::psat(po, f);
        } catch (const std::exception& e) {
            ++violations;
            if (violations == 1) o.fail(std::string("psat raised: ") + e.what());
            continue;
        }
        bool bounded = testkit::psat_bounded(po, f, lo, hi);
        if (bounded && !got.holds) {
            ++violations;
            if (violations == 1) o.fail("bounded search found a completion psat missed");
            continue;
        }
        if (got.holds) {
            ++positive;
            auto g = po.substitute(*got.witness);
            if (!eval::eval_at(g, g.size(), f, Registry::builtins()).value) {
                ++violations;
                if (violations == 1) o.fail("random psat witness fails ground evaluation");
                continue;
            }
            bool witness_in_box = true;
            for (const auto& [name, v] : got.witness->entries()) {
                (void)name;
                if (v.sort() == Sort::Int && (v.as_int() < lo || v.as_int() > hi))
                    witness_in_box = false;
            }
            if (witness_in_box && !bounded) {
                ++violations;
                if (violations == 1) o.fail("in-box witness invisible to bounded search");
            }
        }
    }
    if (violations) o.fail(std::to_string(violations) + " protocol violations in 300 instances");
    o.detail = "worked pair + 300 instances (" + std::to_string(positive) + " satisfiable)";
    enforce_limit(o, start, 60.0);
    return o;
}

// ── 6: solver integrity ──────────────────────────────────────────────────

Outcome check_solver_integrity() {
    Outcome o;
    auto start = Clock::now();

    constraints::Lin xx = constraints::lin_var("x");
    xx.add(constraints::lin_var("x"));
    xx.add(constraints::lin_const(-1));
    if (constraints::satisfiable(constraints::c_int(xx, constraints::IntRel::Eq)).verdict !=
        constraints::SatVerdict::Unsat)
        o.fail("x + x = 1 was not reported unsatisfiable");

    // Atoms drawn here keep every threshold within [-8, 8] over at most
    // three variables, so satisfiability is invariant under collapsing any
    // solution into [-12, 12]: brute force over that box is exact.
    testkit::Rng rng(11006);
    int mismatches = 0, sat_count = 0;
    for (int t = 0; t < 500; ++t) {
        auto c = testkit::random_constraint(rng, 3, 4);
        auto got = constraints::satisfiable(c);
        bool want = testkit::brute_force_sat(c, -12, 12);
        if (got.verdict == constraints::SatVerdict::Unknown) {
            ++mismatches;
            if (mismatches == 1) o.fail("solver gave up on instance " + std::to_string(t));
            continue;
        }
        bool is_sat = got.verdict == constraints::SatVerdict::Sat;
        if (is_sat != want) {
            ++mismatches;
            if (mismatches == 1)
                o.fail("verdict mismatch on instance " + std::to_string(t) + ": " +
                       constraints::to_text(c));
        }
        if (is_sat) {
            ++sat_count;
            if (!got.model || !constraints::evaluate(c, *got.model)) {
                ++mismatches;
                if (mismatches == 1) o.fail("model fails re-evaluation on instance " + std::to_string(t));
            }
        }
    }
    if (mismatches) o.fail(std::to_string(mismatches) + " mismatches in 500 formulae");
    o.detail = "500 formulae (" + std::to_string(sat_count) + " sat, models re-checked)";
    enforce_limit(o, start, 30.0);
    return o;
}

// ── 7: guard solutions ───────────────────────────────────────────────────

Outcome check_guard_solutions() {
    Outcome o;
    auto start = Clock::now();
    testkit::Rng rng(11007);
    int violations = 0, nonempty = 0;
    for (int t = 0; t < 300; ++t) {
        auto h = testkit::random_history(rng, rng.range(1, 5), 4);
        auto binders = testkit::random_binders(rng);
        auto g = testkit::random_guard(rng, binders, 3);
        int i = rng.range(1, h.size());

        auto got = guards::solutions(h, i, *g);
        auto want = testkit::oracle_guard_solutions(h, i, g);
        if (got != want) {
            ++violations;
            if (violations == 1)
                o.fail("solution set mismatch on instance " + std::to_string(t) + ": " +
                       format_guard(*g));
            continue;
        }
        auto consts = h.constants();
        for (const auto& s : got) {
            for (const auto& [name, v] : s.entries()) {
                (void)name;
                const auto& pool = consts[v.sort()];
                if (std::find(pool.begin(), pool.end(), v) == pool.end()) {
                    ++violations;
                    if (violations == 1)
                        o.fail("solution uses a value absent from the history: " + v.to_string());
                }
            }
        }
        if (!got.empty()) ++nonempty;
    }
    if (violations) o.fail(std::to_string(violations) + " violations in 300 instances");
    if (nonempty < 30) o.fail("generator exercised too few non-trivial guards");
    o.detail = "300 instances (" + std::to_string(nonempty) + " with solutions)";
    enforce_limit(o, start, 30.0);
    return o;
}

// ── 8: table engine scaling ──────────────────────────────────────────────

Outcome check_dp_scaling() {
    Outcome o;
    auto start = Clock::now();
    auto doc = load_policy("ebay_ontime.ptltl");

    // Bounded value pools keep per-session structure constant, so table
    // work should grow about linearly with the number of sessions.
    auto build = [](int sessions) {
        const char* items[] = {"camera", "lens", "book", "radio"};
        History h;
        for (int j = 0; j < sessions; ++j) {
            const char* item = items[j % 4];
            long day = 1 + j % 5;
            long value = 50 + 10 * (j % 4);
            h.append(Session::of({
                Event{"win", {Value::text(item), Value::integer(value)}},
                Event{"pay", {Value::integer(day), Value::text(item), Value::integer(value)}},
                Event{"post", {Value::text(item), Value::integer(day)}},
                Event{"post", {Value::text(items[(j + 1) % 4]), Value::integer(1 + (j + 1) % 5)}},
                Event{"positive", {}},
            }));
        }
        return h;
    };
    auto small = build(100);
    auto large = build(400);

    // One untimed pass warms allocators; then a single timed run per size.
    if (!dp::check_dp(small, doc.policy, Registry::builtins()))
        o.fail("the small history should comply");

    auto t0 = Clock::now();
    bool small_ok = dp::check_dp(small, doc.policy, Registry::builtins());
    double small_s = seconds_since(t0);

    auto t1 = Clock::now();
    bool large_ok = dp::check_dp(large, doc.policy, Registry::builtins());
    double large_s = seconds_since(t1);

    if (!small_ok || !large_ok) o.fail("constructed histories were rejected");
    if (large_s > 8.0 * small_s) {
        std::ostringstream m;
        m.precision(4);
        m << std::fixed << "growth " << large_s << "s vs " << small_s
          << "s exceeds the 8x bound";
        o.fail(m.str());
    }
    std::ostringstream d;
    d.precision(1);
    d << std::fixed << "100 sessions " << small_s * 1000 << "ms, 400 sessions "
      << large_s * 1000 << "ms";
    o.detail = d.str();
    enforce_limit(o, start, 60.0);
    return o;
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int k = 1; k < argc; ++k) {
        if (std::strcmp(argv[k], "--only") == 0 && k + 1 < argc) {
            only = std::atoi(argv[k + 1]);
            ++k;
        } else {
            std::cerr << "usage: acceptance [--only N]\n";
            return 2;
        }
    }

    struct Entry {
        int id;
        const char* name;
        Outcome (*run)();
    };
    const Entry entries[] = {
        {1, "corpus verdicts", check_corpus_verdicts},
        {2, "engine equivalence", check_engine_equivalence},
        {3, "quantifier reduction fidelity", check_qbf_fidelity},
        {4, "counting semantics", check_counting},
        {5, "partial observability", check_partial_observability},
        {6, "solver integrity", check_solver_integrity},
        {7, "guard solutions", check_guard_solutions},
        {8, "table engine scaling", check_dp_scaling},
    };

    int failures = 0;
    for (const Entry& e : entries) {
        if (only && e.id != only) continue;
        Outcome r;
        try {
            r = e.run();
        } catch (const std::exception& ex) {
            r.pass = false;
            r.detail = std::string("raised: ") + ex.what();
        }
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << e.id << " " << e.name;
        if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
        std::cout << "\n";
        if (!r.pass) ++failures;
    }
    return failures;
}
