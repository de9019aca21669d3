// Command-line front end. Exit codes: 0 success, 1 config/usage error,
// 2 numerical failure, 3 check-suite failure.
#pragma once

#include <string>
#include <vector>

namespace stiffnet::cli {

int run(int argc, const char* const* argv);

// Convenience for in-process tests.
int run(const std::vector<std::string>& args);

}  // namespace stiffnet::cli
