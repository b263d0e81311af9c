#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "langevin_bounds/error.hpp"

namespace lbound::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInfeasibleS = 2,
  kTailDivergence = 3,
  kSimulationFailure = 4,
  kA1Violation = 5,
  kValidationFailed = 6,
};

int exit_code_for(ErrorKind kind) noexcept;

// Entry point of the `lbound` tool. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace lbound::cli
