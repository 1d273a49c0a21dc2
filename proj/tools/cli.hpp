#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rollsim::cli {

enum ExitCode { kOk = 0, kNumerical = 1, kConfig = 2, kCriterionFailed = 3 };

/// Runs one command line (args[0] is the subcommand). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rollsim::cli
