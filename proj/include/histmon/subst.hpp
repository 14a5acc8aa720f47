#pragma once

#include "histmon/value.hpp"

#include <map>
#include <optional>
#include <string>

namespace histmon {

// Finite map from variable names to ground values.
class Substitution {
public:
    Substitution() = default;

    void bind(const std::string& var, Value v) { map_.insert_or_assign(var, std::move(v)); }

    const Value* lookup(const std::string& var) const {
        auto it = map_.find(var);
        return it == map_.end() ? nullptr : &it->second;
    }

    bool contains(const std::string& var) const { return map_.count(var) != 0; }
    bool empty() const { return map_.empty(); }
    size_t size() const { return map_.size(); }

    const std::map<std::string, Value>& entries() const { return map_; }

    // Bindings of `other` win on overlap.
    Substitution overridden_by(const Substitution& other) const {
        Substitution out = *this;
        for (const auto& [k, v] : other.map_) out.bind(k, v);
        return out;
    }

    template <typename Pred>
    Substitution restricted_to(Pred keep) const {
        Substitution out;
        for (const auto& [k, v] : map_)
            if (keep(k)) out.bind(k, v);
        return out;
    }

    bool operator==(const Substitution& o) const { return map_ == o.map_; }
    bool operator<(const Substitution& o) const {
        auto a = map_.begin(), b = o.map_.begin();
        for (; a != map_.end() && b != o.map_.end(); ++a, ++b) {
            if (a->first != b->first) return a->first < b->first;
            int c = a->second.compare(b->second);
            if (c != 0) return c < 0;
        }
        return a == map_.end() && b != o.map_.end();
    }

    // Stable text form "{x := 1, y := "a"}", usable as a cache key.
    std::string to_string() const {
        std::string out = "{";
        bool first = true;
        for (const auto& [k, v] : map_) {
            if (!first) out += ", ";
            first = false;
            out += k + " := " + v.to_string();
        }
        return out + "}";
    }

private:
    std::map<std::string, Value> map_;
};

} // namespace histmon
