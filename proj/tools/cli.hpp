#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rbfpu::cli {

/// Exit statuses of the rbfpu command.
enum ExitCode : int {
  kOk = 0,
  kValidationError = 1,
  kRuntimeError = 2,
};

/// Runs the command line `args` (without the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rbfpu::cli
