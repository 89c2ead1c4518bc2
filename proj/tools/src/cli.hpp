#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xyberry::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  // a library error surfaced while running
  kUsage = 2,
  kVerifyFailed = 3,
};

/// Runs one invocation. `args` excludes the program name. Data products go to
/// --out (or `out` when absent or "-"); errors go to `err` as JSON.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xyberry::cli
