#pragma once

#include <gmpxx.h>

#include <string>
#include <variant>

namespace histmon {

enum class Sort { Int, Rat, Str };

const char* sort_name(Sort s);

// Ground value of one of the three sorts. Integers and rationals are
// arbitrary precision; rationals are kept in lowest terms with a positive
// denominator, so structural equality coincides with semantic equality.
class Value {
public:
    static Value integer(mpz_class v) { return Value(std::move(v)); }
    static Value integer(long v) { return Value(mpz_class(v)); }
    static Value rational(mpq_class v) {
        v.canonicalize();
        return Value(std::move(v));
    }
    static Value rational(long num, long den) { return rational(mpq_class(num, den)); }
    static Value text(std::string s) { return Value(std::move(s)); }

    Sort sort() const { return static_cast<Sort>(rep_.index()); }

    const mpz_class& as_int() const { return std::get<mpz_class>(rep_); }
    const mpq_class& as_rat() const { return std::get<mpq_class>(rep_); }
    const std::string& as_str() const { return std::get<std::string>(rep_); }

    // Numeric view with Int promoted to Rat; only valid for numeric sorts.
    mpq_class as_number() const;

    bool operator==(const Value& o) const { return rep_ == o.rep_; }
    bool operator!=(const Value& o) const { return !(*this == o); }

    // Total order used for canonical serialization: sort rank first, then value.
    int compare(const Value& o) const;
    bool operator<(const Value& o) const { return compare(o) < 0; }

    // Literal form: 42, -7, 3/4, "abc". Strings are quoted with minimal escaping.
    std::string to_string() const;

private:
    explicit Value(mpz_class v) : rep_(std::move(v)) {}
    explicit Value(mpq_class v) : rep_(std::move(v)) {}
    explicit Value(std::string v) : rep_(std::move(v)) {}

    std::variant<mpz_class, mpq_class, std::string> rep_;
};

std::string quote_string(const std::string& s);

} // namespace histmon
