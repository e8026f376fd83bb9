#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace likev::cli {

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitDomain = 4;

/// Runs the `likev` command line. `args` excludes the program name. The
/// payload goes to `out`; diagnostics go to `err`, one line each.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace likev::cli
