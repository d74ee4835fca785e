#pragma once
// Command-line orchestration: verify (exhaustive checks), the Monte Carlo
// estimators, the drift sweep, and single-trace debugging.
//
// Exit codes: 0 success, 1 at least one exhaustive check reported a
// violation, 2 usage or configuration error.

#include <string>
#include <vector>

namespace cookiewalk {

int run_cli(int argc, const char* const* argv);

// Convenience for tests: args exclude the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace cookiewalk
