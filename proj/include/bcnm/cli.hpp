#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bcnm {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInput = 2,
  kExitInternal = 3,
};

/// Entry point of the bcnm tool. `args` excludes the program name.
/// Subcommands: detect, generate, report, compare.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bcnm
