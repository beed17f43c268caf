#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pwreath {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitFail = 1, kExitBudget = 2, kExitUsage = 64 };

/// Runs the command line; RunReport JSON (or CSV for hilbert) goes to `out`,
/// help text and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pwreath
