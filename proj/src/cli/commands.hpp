#pragma once

#include <ostream>

namespace exactflow::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitVerifyFail = 1;
inline constexpr int kExitUsage = 2;

// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace exactflow::cli
