#pragma once

// Command line driver. Exit codes: 0 all checks passed, 1 at least one check
// failed, 2 usage or input error.

#include <string>
#include <vector>

namespace cctlab {

int run_cli(int argc, const char* const* argv);

// Convenience for in-process tests: args exclude the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace cctlab
