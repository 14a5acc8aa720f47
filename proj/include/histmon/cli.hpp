#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace histmon {
namespace cli {

// Command-line front end. `args` excludes the program name. Exit codes:
// 0 verdict is positive (or the command succeeded), 1 verdict is negative,
// 2 usage or input error, 3 a budget was exhausted.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace cli
} // namespace histmon
