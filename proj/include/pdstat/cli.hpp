#pragma once

#include <iosfwd>

namespace pdstat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `pdstat` tool. JSON results go to `out` (or --out),
/// diagnostics to `err`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace pdstat::cli
