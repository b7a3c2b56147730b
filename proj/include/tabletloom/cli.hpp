#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tabletloom {

enum ExitCode : int {
  kExitOk = 0,
  kExitDomainError = 1,
  kExitUsage = 2,
};

/// Runs the command line tool. `args` excludes the program name. Input "-"
/// reads from `in`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace tabletloom
