#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace schwarzian_lab::cli {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kCheckFailed = 1,     // identity, bound or hypothesis check did not hold
  kParseError = 2,      // family text, literal or command-line usage
  kEvaluationError = 3, // pole, overflow, critical point, guard
  kIoError = 4,
};

/// Runs one command line (args[0] is the program name). Records go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace schwarzian_lab::cli
