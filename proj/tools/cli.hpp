#pragma once

#include <ostream>

#include "irrev/error.hpp"

namespace irrev::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

int exit_code_for(ErrorCode code);

/// Entry point of the `irrev` tool. Flags override IRREV_* environment
/// variables, which override built-in defaults.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace irrev::cli
