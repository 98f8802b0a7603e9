#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace esshist::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kNumericError = 3 };

/// Runs the esshist command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace esshist::cli
