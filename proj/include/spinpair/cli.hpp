#pragma once

#include <string>
#include <vector>

namespace spinpair {

/// Command-line entry point. Exit codes: 0 success, 1 usage error,
/// 2 data/validation error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace spinpair
