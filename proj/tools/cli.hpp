#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modlogic::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kInternalError = 2,
  kSat = 10,
  kUnsat = 20,
};

/// Runs the command line `args` (without the program name). Reports go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modlogic::cli
