#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dualball {

/// Exit codes: 0 success, 1 domain failure (certification failed, budget
/// exhausted, violated precondition, table miss), 2 usage or parse error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dualball
