#pragma once

#include <string>
#include <vector>

namespace divcurl::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kCompat = 2, kSolver = 3, kInput = 4 };

// Runs one divcurl command. args excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace divcurl::cli
