#pragma once

#include <string>
#include <vector>

namespace spme::cli {

// Subcommands: verify, simulate, estimate, particles, convergence,
// print-defaults. Exit codes: 0 success, 1 scientific failure (violated
// inequality or all-paths blow-up), 2 usage/configuration error.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace spme::cli
