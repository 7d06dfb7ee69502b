#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fpp::cli {

/// Exit codes of `fpp verify` (and the other subcommands on failure).
inline constexpr int kExitOk = 0;
inline constexpr int kExitHardFailure = 1;
inline constexpr int kExitSoftOnly = 2;

/// Runs the command line `args` (without the program name), writing
/// results to `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fpp::cli
