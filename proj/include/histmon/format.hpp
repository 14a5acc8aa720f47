#pragma once

#include "histmon/ast.hpp"

#include <string>

namespace histmon {

// Canonical concrete syntax. Abbreviation patterns (false, |, ->, once,
// historically, exists) are re-sugared deterministically, so formatting is
// a fixed point: parsing the output reproduces the same structure.
std::string format_term(const Term& t);
std::string format_guard(const Guard& g);
std::string format_formula(const Formula& f);

} // namespace histmon
