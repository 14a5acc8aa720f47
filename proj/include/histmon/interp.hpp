#pragma once

#include "histmon/ast.hpp"
#include "histmon/errors.hpp"
#include "histmon/subst.hpp"
#include "histmon/value.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace histmon {

// Argument pattern for overload matching: an exact sort, or any numeric sort.
enum class ArgPat { Int, Rat, Str, Num };

bool pat_accepts(ArgPat p, Sort s);

// Fixed interpretation of function and relation symbols. Symbols are rigid
// (session-independent) and total on their matching sorts except where a
// documented error applies (division by zero).
class Registry {
public:
    struct FnOverload {
        std::vector<ArgPat> params;
        Sort result;
        std::function<Value(const std::vector<Value>&, Pos)> apply;
    };

    struct RelOverload {
        std::vector<ArgPat> params;
        std::function<bool(const std::vector<Value>&)> holds;
    };

    void add_function(const std::string& name, FnOverload f) { fns_[name].push_back(std::move(f)); }
    void add_relation(const std::string& name, RelOverload r) { rels_[name].push_back(std::move(r)); }

    bool has_function(const std::string& name) const { return fns_.count(name) != 0; }
    bool has_relation(const std::string& name) const { return rels_.count(name) != 0; }

    // First registered overload accepting the argument sorts, or null.
    const FnOverload* find_function(const std::string& name, const std::vector<Sort>& args) const;
    const RelOverload* find_relation(const std::string& name, const std::vector<Sort>& args) const;

    // Result sort of a function application, if any overload matches.
    std::optional<Sort> function_result(const std::string& name, const std::vector<Sort>& args) const;

    // Built-in arithmetic, comparisons, and string helpers.
    static const Registry& builtins();

private:
    std::map<std::string, std::vector<FnOverload>> fns_;
    std::map<std::string, std::vector<RelOverload>> rels_;
};

// Evaluates a term under a substitution binding all of its variables.
// Raises EvalError for unbound variables, unknown symbols, or division by
// zero; the caller is expected to abort the enclosing check.
Value eval_term(const Term& t, const Substitution& s, const Registry& reg);

// Decides an interpreted relation on evaluated arguments.
bool eval_rel(const std::string& name, const std::vector<Sort>& static_sorts,
              const std::vector<Value>& args, const Registry& reg, Pos pos = {});

} // namespace histmon
