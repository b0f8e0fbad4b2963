#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rlnc::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kInfeasible = 3,
  kBudget = 4,
};

/// Runs one command line (without the program name). Reports go to out,
/// diagnostics to err; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rlnc::cli
