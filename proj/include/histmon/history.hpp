#pragma once

#include "histmon/errors.hpp"
#include "histmon/subst.hpp"
#include "histmon/value.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace histmon {

// ── Ground histories ─────────────────────────────────────────────────────

struct Event {
    std::string pred;
    std::vector<Value> args;

    bool operator==(const Event& o) const { return pred == o.pred && args == o.args; }
    int compare(const Event& o) const;
    bool operator<(const Event& o) const { return compare(o) < 0; }
};

// Finite set of ground events, stored sorted and deduplicated so that equal
// sets have identical representations.
class Session {
public:
    Session() = default;
    static Session of(std::vector<Event> events);

    const std::vector<Event>& events() const { return events_; }
    bool contains(const Event& e) const;

    // Events whose predicate is `pred`, in canonical order.
    std::vector<const Event*> with_pred(const std::string& pred) const;

    bool operator==(const Session& o) const { return events_ == o.events_; }

private:
    std::vector<Event> events_;
};

// Non-empty list of sessions, addressed with 1-based indices.
class History {
public:
    History() = default;
    explicit History(std::vector<Session> sessions) : sessions_(std::move(sessions)) {}

    int size() const { return static_cast<int>(sessions_.size()); }
    bool empty() const { return sessions_.empty(); }

    // 1-based; out of range raises Error.
    const Session& at(int i) const;

    const std::vector<Session>& sessions() const { return sessions_; }
    void append(Session s) { sessions_.push_back(std::move(s)); }

    // Number of predicate and argument occurrences across all sessions.
    size_t symbol_count() const;

    // Distinct argument values appearing anywhere, grouped by sort.
    std::map<Sort, std::vector<Value>> constants() const;
    std::vector<Value> constants_of(Sort s) const;

    bool operator==(const History& o) const { return sessions_ == o.sessions_; }

private:
    std::vector<Session> sessions_;
};

// ── Partially observed histories ─────────────────────────────────────────
//
// Event arguments may be named unknowns. A partially observed history
// denotes the set of ground histories obtained by substituting values for
// all unknowns; a ground history is the special case with none.

struct HistVar {
    std::string name;
    Sort sort;

    bool operator==(const HistVar& o) const { return name == o.name && sort == o.sort; }
};

using POArg = std::variant<Value, HistVar>;

int po_arg_compare(const POArg& a, const POArg& b);
std::string po_arg_to_string(const POArg& a);

struct POEvent {
    std::string pred;
    std::vector<POArg> args;

    bool operator==(const POEvent& o) const { return pred == o.pred && args == o.args; }
    int compare(const POEvent& o) const;
    bool operator<(const POEvent& o) const { return compare(o) < 0; }
};

class POSession {
public:
    POSession() = default;
    static POSession of(std::vector<POEvent> events);

    const std::vector<POEvent>& events() const { return events_; }
    std::vector<const POEvent*> with_pred(const std::string& pred) const;

private:
    std::vector<POEvent> events_;
};

class POHistory {
public:
    POHistory() = default;
    explicit POHistory(std::vector<POSession> sessions) : sessions_(std::move(sessions)) {}

    int size() const { return static_cast<int>(sessions_.size()); }
    bool empty() const { return sessions_.empty(); }
    const POSession& at(int i) const;
    const std::vector<POSession>& sessions() const { return sessions_; }
    void append(POSession s) { sessions_.push_back(std::move(s)); }

    // Unknowns appearing anywhere, with their sorts.
    std::map<std::string, Sort> variables() const;
    bool ground() const { return variables().empty(); }

    // Distinct ground argument values, grouped by sort.
    std::map<Sort, std::vector<Value>> constants() const;

    // Requires dom(s) to cover every unknown; sorts must match.
    History substitute(const Substitution& s) const;

    // Succeeds exactly when the history is ground.
    std::optional<History> to_ground() const;

    static POHistory lift(const History& h);

private:
    std::vector<POSession> sessions_;
};

} // namespace histmon
