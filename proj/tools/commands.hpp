#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phasestab::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 2,
  kNegative = 10,   // certified "no" / not certifiably stable
  kHeuristic = 11,  // heuristic yes
  kUnverified = 12, // budget exhausted, window insufficient, or a failed check
};

/// Runs one subcommand; `args` excludes the program name. The report goes to
/// --out when given (written atomically), otherwise to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phasestab::cli
