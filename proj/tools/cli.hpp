#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polydisc::cli {

/// Exit status: 0 success, 1 error, 2 diverging mult-check verdict.
enum Exit : int { kOk = 0, kError = 1, kDiverging = 2 };

/// Runs one command. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polydisc::cli
