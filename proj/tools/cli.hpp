#pragma once

#include <ostream>

namespace windcournot::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitSolver = 1,
  kExitConfig = 2,
  kExitAssumption = 3,
  kExitOracle = 4,
};

/// Parses argv, runs one subcommand and writes results to `out` (or the
/// configured output file). Failures print one JSON line on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace windcournot::cli
