#pragma once

#include <ostream>
#include <span>
#include <string>

namespace cpercept {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFindings = 2;

/// Entry point of the `cpercept` tool. `args` excludes the program name.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace cpercept
