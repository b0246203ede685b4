#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace embalign::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Parses `args` (without the program name) and runs one subcommand.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace embalign::cli
