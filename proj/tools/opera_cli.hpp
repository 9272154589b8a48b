#pragma once

// Command-line driver. Exit codes: 0 success, 1 verification failure,
// 2 invalid input or configuration.

#include <iosfwd>
#include <string>
#include <vector>

namespace opera::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitInput = 2;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace opera::cli
