#include "histmon/history.hpp"

#include <algorithm>

namespace histmon {

// ── Event / Session ──────────────────────────────────────────────────────

int Event::compare(const Event& o) const {
    if (pred != o.pred) return pred < o.pred ? -1 : 1;
    if (args.size() != o.args.size()) return args.size() < o.args.size() ? -1 : 1;
    for (size_t k = 0; k < args.size(); ++k) {
        int c = args[k].compare(o.args[k]);
        if (c != 0) return c;
    }
    return 0;
}

Session Session::of(std::vector<Event> events) {
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());
    Session s;
    s.events_ = std::move(events);
    return s;
}

bool Session::contains(const Event& e) const {
    return std::binary_search(events_.begin(), events_.end(), e);
}

std::vector<const Event*> Session::with_pred(const std::string& pred) const {
    std::vector<const Event*> out;
    for (const auto& e : events_)
        if (e.pred == pred) out.push_back(&e);
    return out;
}

// ── History ──────────────────────────────────────────────────────────────

const Session& History::at(int i) const {
    if (i < 1 || i > size()) throw Error("session index " + std::to_string(i) + " out of range");
    return sessions_[static_cast<size_t>(i - 1)];
}

size_t History::symbol_count() const {
    size_t n = 0;
    for (const auto& s : sessions_)
        for (const auto& e : s.events()) n += 1 + e.args.size();
    return n;
}

std::map<Sort, std::vector<Value>> History::constants() const {
    std::map<Sort, std::set<Value>> seen;
    for (const auto& s : sessions_)
        for (const auto& e : s.events())
            for (const auto& v : e.args) seen[v.sort()].insert(v);
    std::map<Sort, std::vector<Value>> out;
    for (auto& [sort, vals] : seen) out.emplace(sort, std::vector<Value>(vals.begin(), vals.end()));
    return out;
}

std::vector<Value> History::constants_of(Sort s) const {
    auto all = constants();
    auto it = all.find(s);
    return it == all.end() ? std::vector<Value>{} : it->second;
}

// ── Partially observed histories ─────────────────────────────────────────

int po_arg_compare(const POArg& a, const POArg& b) {
    if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
    if (a.index() == 0) return std::get<Value>(a).compare(std::get<Value>(b));
    const auto& x = std::get<HistVar>(a);
    const auto& y = std::get<HistVar>(b);
    if (x.name != y.name) return x.name < y.name ? -1 : 1;
    if (x.sort != y.sort) return static_cast<int>(x.sort) < static_cast<int>(y.sort) ? -1 : 1;
    return 0;
}

std::string po_arg_to_string(const POArg& a) {
    if (const auto* v = std::get_if<Value>(&a)) return v->to_string();
    return std::get<HistVar>(a).name;
}

int POEvent::compare(const POEvent& o) const {
    if (pred != o.pred) return pred < o.pred ? -1 : 1;
    if (args.size() != o.args.size()) return args.size() < o.args.size() ? -1 : 1;
    for (size_t k = 0; k < args.size(); ++k) {
        int c = po_arg_compare(args[k], o.args[k]);
        if (c != 0) return c;
    }
    return 0;
}

POSession POSession::of(std::vector<POEvent> events) {
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());
    POSession s;
    s.events_ = std::move(events);
    return s;
}

std::vector<const POEvent*> POSession::with_pred(const std::string& pred) const {
    std::vector<const POEvent*> out;
    for (const auto& e : events_)
        if (e.pred == pred) out.push_back(&e);
    return out;
}

const POSession& POHistory::at(int i) const {
    if (i < 1 || i > size()) throw Error("session index " + std::to_string(i) + " out of range");
    return sessions_[static_cast<size_t>(i - 1)];
}

std::map<std::string, Sort> POHistory::variables() const {
    std::map<std::string, Sort> out;
    for (const auto& s : sessions_)
        for (const auto& e : s.events())
            for (const auto& a : e.args)
                if (const auto* v = std::get_if<HistVar>(&a)) {
                    auto [it, inserted] = out.emplace(v->name, v->sort);
                    if (!inserted && it->second != v->sort)
                        throw Error("unknown " + v->name + " used at sorts " + sort_name(it->second) +
                                    " and " + sort_name(v->sort));
                }
    return out;
}

std::map<Sort, std::vector<Value>> POHistory::constants() const {
    std::map<Sort, std::set<Value>> seen;
    for (const auto& s : sessions_)
        for (const auto& e : s.events())
            for (const auto& a : e.args)
                if (const auto* v = std::get_if<Value>(&a)) seen[v->sort()].insert(*v);
    std::map<Sort, std::vector<Value>> out;
    for (auto& [sort, vals] : seen) out.emplace(sort, std::vector<Value>(vals.begin(), vals.end()));
    return out;
}

History POHistory::substitute(const Substitution& s) const {
    std::vector<Session> sessions;
    sessions.reserve(sessions_.size());
    for (const auto& ps : sessions_) {
        std::vector<Event> events;
        events.reserve(ps.events().size());
        for (const auto& pe : ps.events()) {
            Event e;
            e.pred = pe.pred;
            e.args.reserve(pe.args.size());
            for (const auto& a : pe.args) {
                if (const auto* v = std::get_if<Value>(&a)) {
                    e.args.push_back(*v);
                    continue;
                }
                const auto& hv = std::get<HistVar>(a);
                const Value* bound = s.lookup(hv.name);
                if (!bound) throw Error("no binding for unknown " + hv.name);
                if (bound->sort() != hv.sort)
                    throw SortError("binding for " + hv.name + " has sort " +
                                    std::string(sort_name(bound->sort())) + ", expected " +
                                    sort_name(hv.sort));
                e.args.push_back(*bound);
            }
            events.push_back(std::move(e));
        }
        sessions.push_back(Session::of(std::move(events)));
    }
    return History(std::move(sessions));
}

std::optional<History> POHistory::to_ground() const {
    if (!ground()) return std::nullopt;
    return substitute(Substitution{});
}

POHistory POHistory::lift(const History& h) {
    std::vector<POSession> sessions;
    sessions.reserve(h.sessions().size());
    for (const auto& s : h.sessions()) {
        std::vector<POEvent> events;
        events.reserve(s.events().size());
        for (const auto& e : s.events()) {
            POEvent pe;
            pe.pred = e.pred;
            for (const auto& v : e.args) pe.args.push_back(v);
            events.push_back(std::move(pe));
        }
        sessions.push_back(POSession::of(std::move(events)));
    }
    return POHistory(std::move(sessions));
}

} // namespace histmon
