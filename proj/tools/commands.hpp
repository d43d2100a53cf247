#pragma once

namespace sda::cli {

/// Exit codes: 0 success, 1 usage or input error, 2 the algorithm could not anonymize.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInfeasible = 2;

int run(int argc, const char* const* argv);

}  // namespace sda::cli
