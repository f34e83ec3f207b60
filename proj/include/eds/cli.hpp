#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eds {

/// Exit codes of the `eds` command.
enum ExitCode : int {
  kExitOk = 0,
  kExitViolation = 1,
  kExitConfig = 2,
  kExitCurve = 3,
  kExitUnsound = 4,
};

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eds
