#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace conformable::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDoesNotExist = 2,
  kConvergence = 3,
  kVerifyMismatch = 4,
};

/// Runs the command line `args` (without the program name) and returns the
/// process exit code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace conformable::cli
