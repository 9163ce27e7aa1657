#pragma once

#include <ostream>

namespace qht {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 1,
  kExitNumerical = 2,
  kExitSuiteFailure = 3,
};

/// Runs the `qht` command line. Output that is not redirected with --out goes
/// to `out`; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qht
