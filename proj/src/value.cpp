#include "histmon/value.hpp"

namespace histmon {

const char* sort_name(Sort s) {
    switch (s) {
    case Sort::Int: return "Int";
    case Sort::Rat: return "Rat";
    case Sort::Str: return "Str";
    }
    return "?";
}

mpq_class Value::as_number() const {
    if (sort() == Sort::Int) return mpq_class(as_int());
    return as_rat();
}

int Value::compare(const Value& o) const {
    if (rep_.index() != o.rep_.index())
        return rep_.index() < o.rep_.index() ? -1 : 1;
    switch (sort()) {
    case Sort::Int: return cmp(as_int(), o.as_int());
    case Sort::Rat: return cmp(as_rat(), o.as_rat());
    case Sort::Str: {
        int c = as_str().compare(o.as_str());
        return c < 0 ? -1 : c > 0 ? 1 : 0;
    }
    }
    return 0;
}

std::string quote_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string Value::to_string() const {
    switch (sort()) {
    case Sort::Int: return as_int().get_str();
    case Sort::Rat: return as_rat().get_str();
    case Sort::Str: return quote_string(as_str());
    }
    return "";
}

} // namespace histmon
