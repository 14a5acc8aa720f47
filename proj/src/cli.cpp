#include "histmon/cli.hpp"

#include "histmon/dp.hpp"
#include "histmon/eval.hpp"
#include "histmon/parser.hpp"
#include "histmon/partial.hpp"
#include "histmon/testkit.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace histmon {
namespace cli {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out << content;
    if (!out.flush()) throw Error("cannot write " + path);
}

// --budget beats HISTMON_BUDGET beats library defaults; 0 means unset.
uint64_t resolve_budget(uint64_t flag) {
    if (flag > 0) return flag;
    if (const char* e = std::getenv("HISTMON_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(e, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return 0;
}

partial::Options partial_options(uint64_t flag) {
    partial::Options opts;
    uint64_t b = resolve_budget(flag);
    if (b > 0) {
        opts.node_budget = b;
        opts.solver.branches = b;
        opts.solver.derived = b;
        opts.solver.search_nodes = b;
    }
    return opts;
}

json value_json(const Value& v) {
    switch (v.sort()) {
    case Sort::Int:
        if (v.as_int().fits_slong_p()) return json(v.as_int().get_si());
        return json{{"int", v.as_int().get_str()}};
    case Sort::Rat:
        return json{{"rat", v.as_rat().get_num().get_str() + "/" + v.as_rat().get_den().get_str()}};
    case Sort::Str:
        return json(v.as_str());
    }
    return json();
}

void print_witness(std::ostream& out, const Substitution& w) {
    for (const auto& [name, v] : w.entries()) out << "  " << name << " = " << v.to_string() << "\n";
}

json witness_json(const Substitution& w) {
    json j = json::object();
    for (const auto& [name, v] : w.entries()) j[name] = value_json(v);
    return j;
}

bool report_vacuous(const POHistory& h, bool structured, const char* command, std::ostream& out) {
    if (!h.empty()) return false;
    if (structured)
        out << json{{"command", command}, {"holds", true}, {"vacuous", true}}.dump() << "\n";
    else
        out << "true (empty history)\n";
    return true;
}

// ── Subcommands ──────────────────────────────────────────────────────────

int cmd_check(const std::string& policy_path, const std::string& history_path,
              const std::string& engine, bool structured, std::ostream& out) {
    PolicyDocument doc = parse_policy(read_file(policy_path));
    if (engine == "dp") {
        // Refuse unsupported policies before touching the history, which
        // may be large.
        if (uses_count(*doc.policy))
            throw CapabilityError("the table engine does not support the count quantifier");
        if (uses_guards(*doc.policy))
            throw CapabilityError("the table engine does not support guarded quantifiers");
    }
    POHistory po = parse_history(read_file(history_path), &doc.preds, GroundMode::Require);
    if (report_vacuous(po, structured, "check", out)) return 0;
    History h = *po.to_ground();

    bool holds = false;
    dp::Stats stats;
    if (engine == "dp")
        holds = dp::check_dp(h, doc.policy, Registry::builtins(), &stats);
    else
        holds = eval::check(h, doc.policy, Registry::builtins()).value;

    if (structured) {
        json j{{"command", "check"}, {"engine", engine}, {"holds", holds},
               {"sessions", h.size()}};
        if (engine == "dp")
            j["stats"] = {{"nodes", stats.nodes}, {"columns", stats.columns},
                          {"cells", stats.cells}};
        out << j.dump() << "\n";
    } else {
        out << (holds ? "true" : "false") << "\n";
    }
    return holds ? 0 : 1;
}

int cmd_trace(const std::string& policy_path, const std::string& history_path, bool full,
              std::ostream& out) {
    PolicyDocument doc = parse_policy(read_file(policy_path));
    POHistory po = parse_history(read_file(history_path), &doc.preds, GroundMode::Require);
    if (report_vacuous(po, false, "trace", out)) return 0;
    History h = *po.to_ground();
    eval::Options opts;
    opts.build_trace = true;
    opts.full_trace = full;
    eval::Verdict v = eval::check(h, doc.policy, Registry::builtins(), opts);
    out << eval::render_trace(*v.trace);
    return v.value ? 0 : 1;
}

int cmd_partial(const std::string& policy_path, const std::string& history_path, bool adherence,
                bool structured, uint64_t budget, std::ostream& out) {
    const char* name = adherence ? "adhere" : "psat";
    PolicyDocument doc = parse_policy(read_file(policy_path));
    POHistory h = parse_history(read_file(history_path), &doc.preds, GroundMode::Allow);
    if (report_vacuous(h, structured, name, out)) return 0;

    partial::Options opts = partial_options(budget);
    partial::CheckResult r = adherence
                                 ? partial::adhere(h, doc.policy, Registry::builtins(), opts)
                                 : partial::psat(h, doc.policy, Registry::builtins(), opts);
    if (structured) {
        json j{{"command", name}, {"holds", r.holds}};
        if (r.witness) j[adherence ? "counterexample" : "witness"] = witness_json(*r.witness);
        out << j.dump() << "\n";
    } else {
        out << name << ": " << (r.holds ? "true" : "false") << "\n";
        if (r.witness) {
            out << (adherence ? "violating completion:" : "satisfying completion:") << "\n";
            print_witness(out, *r.witness);
        }
    }
    return r.holds ? 0 : 1;
}

int cmd_emit(const std::string& policy_path, const std::string& history_path,
             const std::string& format, int at, uint64_t budget, std::ostream& out) {
    PolicyDocument doc = parse_policy(read_file(policy_path));
    POHistory h = parse_history(read_file(history_path), &doc.preds, GroundMode::Allow);
    if (h.empty()) throw Error("history has no sessions");
    int i = at > 0 ? at : h.size();
    constraints::CPtr c =
        partial::compile(h, i, doc.policy, Registry::builtins(), partial_options(budget));
    out << (format == "text" ? constraints::to_text(c) + "\n" : constraints::to_smtlib(c));
    return 0;
}

int cmd_append(const std::string& history_path, const std::string& session_path,
               const std::string& out_path, const std::string& policy_path, std::ostream& out) {
    PredTable preds;
    const PredTable* table = nullptr;
    if (!policy_path.empty()) {
        preds = parse_policy(read_file(policy_path)).preds;
        table = &preds;
    }
    POHistory h = parse_history(read_file(history_path), table, GroundMode::Allow);
    h.append(parse_session_json(read_file(session_path), table, GroundMode::Allow));
    std::string text = write_history(h);
    if (out_path.empty())
        out << text;
    else
        write_file(out_path, text);
    return 0;
}

int cmd_gen_qbf(const std::string& qdimacs_path, const std::string& shape,
                const std::string& policy_out, const std::string& history_out, std::ostream& out) {
    testkit::QbfSpec spec = testkit::parse_qdimacs(read_file(qdimacs_path));
    testkit::QbfShape s =
        shape == "trace" ? testkit::QbfShape::TraceLike : testkit::QbfShape::SingleSession;
    testkit::QbfEncoding enc = testkit::encode_qbf(spec, s);
    write_file(policy_out, format_policy({enc.preds, enc.policy}));
    write_file(history_out, write_history(POHistory::lift(enc.history)));
    out << "expected: " << (testkit::qbf_truth(spec) ? "true" : "false") << "\n";
    return 0;
}

int cmd_fmt(const std::string& policy_path, std::ostream& out) {
    out << format_policy(parse_policy(read_file(policy_path)));
    return 0;
}

} // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"policy monitor for session histories", "histmon"};
    app.require_subcommand(1);
    int code = 0;

    // check
    std::string ck_policy, ck_history, ck_engine = "eval";
    bool ck_structured = false;
    auto* check = app.add_subcommand("check", "judge a policy on a ground history");
    check->add_option("policy", ck_policy, "policy file")->required();
    check->add_option("history", ck_history, "history file")->required();
    check->add_option("--engine", ck_engine, "evaluation engine")
        ->check(CLI::IsMember({"eval", "dp"}));
    check->add_flag("--structured", ck_structured, "print one JSON line");
    check->callback([&] { code = cmd_check(ck_policy, ck_history, ck_engine, ck_structured, out); });

    // trace
    std::string tr_policy, tr_history;
    bool tr_full = false;
    auto* trace = app.add_subcommand("trace", "explain a verdict step by step");
    trace->add_option("policy", tr_policy, "policy file")->required();
    trace->add_option("history", tr_history, "history file")->required();
    trace->add_flag("--full", tr_full, "keep short-circuited branches");
    trace->callback([&] { code = cmd_trace(tr_policy, tr_history, tr_full, out); });

    // psat / adhere
    std::string ps_policy, ps_history;
    bool ps_structured = false;
    uint64_t ps_budget = 0;
    auto* psat = app.add_subcommand("psat", "can some completion of the history satisfy the policy");
    psat->add_option("policy", ps_policy, "policy file")->required();
    psat->add_option("history", ps_history, "history file, may contain unknowns")->required();
    psat->add_flag("--structured", ps_structured, "print one JSON line");
    psat->add_option("--budget", ps_budget, "compilation and solver budget");
    psat->callback(
        [&] { code = cmd_partial(ps_policy, ps_history, false, ps_structured, ps_budget, out); });

    std::string ad_policy, ad_history;
    bool ad_structured = false;
    uint64_t ad_budget = 0;
    auto* adhere =
        app.add_subcommand("adhere", "must every completion of the history satisfy the policy");
    adhere->add_option("policy", ad_policy, "policy file")->required();
    adhere->add_option("history", ad_history, "history file, may contain unknowns")->required();
    adhere->add_flag("--structured", ad_structured, "print one JSON line");
    adhere->add_option("--budget", ad_budget, "compilation and solver budget");
    adhere->callback(
        [&] { code = cmd_partial(ad_policy, ad_history, true, ad_structured, ad_budget, out); });

    // emit-constraints
    std::string em_policy, em_history, em_format = "text";
    int em_at = 0;
    uint64_t em_budget = 0;
    auto* emit = app.add_subcommand("emit-constraints",
                                    "compile the policy over a partially observed history");
    emit->add_option("policy", em_policy, "policy file")->required();
    emit->add_option("history", em_history, "history file, may contain unknowns")->required();
    emit->add_option("--format", em_format, "output format")
        ->check(CLI::IsMember({"text", "smtlib"}));
    emit->add_option("--at", em_at, "session index, default last")->check(CLI::PositiveNumber);
    emit->add_option("--budget", em_budget, "compilation budget");
    emit->callback(
        [&] { code = cmd_emit(em_policy, em_history, em_format, em_at, em_budget, out); });

    // append
    std::string ap_history, ap_session, ap_out, ap_policy;
    auto* append = app.add_subcommand("append", "append a session to a history file");
    append->add_option("history", ap_history, "history file")->required();
    append->add_option("session", ap_session, "session file, a JSON event array")->required();
    append->add_option("-o,--out", ap_out, "output path, default stdout");
    append->add_option("--policy", ap_policy, "validate against this policy's declarations");
    append->callback([&] { code = cmd_append(ap_history, ap_session, ap_out, ap_policy, out); });

    // gen-qbf
    std::string gq_input, gq_shape = "single", gq_policy_out, gq_history_out;
    auto* genqbf = app.add_subcommand("gen-qbf", "encode a QDIMACS instance as policy + history");
    genqbf->add_option("qdimacs", gq_input, "QDIMACS file")->required();
    genqbf->add_option("--shape", gq_shape, "encoding shape")
        ->check(CLI::IsMember({"single", "trace"}));
    genqbf->add_option("--policy-out", gq_policy_out, "policy output path")->required();
    genqbf->add_option("--history-out", gq_history_out, "history output path")->required();
    genqbf->callback(
        [&] { code = cmd_gen_qbf(gq_input, gq_shape, gq_policy_out, gq_history_out, out); });

    // fmt
    std::string fm_policy;
    auto* fmt = app.add_subcommand("fmt", "reprint a policy in canonical form");
    fmt->add_option("policy", fm_policy, "policy file")->required();
    fmt->callback([&] { code = cmd_fmt(fm_policy, out); });

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        // Collapse CLI11's exit-code family onto the documented contract:
        // 0 for --help/--version, 2 for any usage problem.
        return app.exit(e, out, err) == 0 ? 0 : 2;
    } catch (const BudgetError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return code;
}

} // namespace cli
} // namespace histmon
