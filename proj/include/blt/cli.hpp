#pragma once

#include <ostream>

namespace blt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitMismatch = 3;

// Entry point for the `blt` tool; stdout/stderr go to the given streams.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace blt::cli
