#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dtnn::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kFormat = 2, kNumeric = 3 };

/// Runs one invocation. args excludes the program name. Progress and errors
/// go to `err`; machine-readable output only to the files named by flags.
int run(const std::vector<std::string>& args, std::ostream& err);

}  // namespace dtnn::cli
