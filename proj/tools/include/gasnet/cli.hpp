#pragma once

#include <iosfwd>

namespace gasnet {

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitSchema = 2,
  kExitSolver = 3,
};

/// Entry point of the gasnet tool. Messages go to out / err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gasnet
