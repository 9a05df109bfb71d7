#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace martinpot::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kInconclusive = 2, kFailure = 3 };

// Runs one command line (without the program name). Results go to `out`
// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace martinpot::cli
