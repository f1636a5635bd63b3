#ifndef LEVYSPEC_CLI_COMMANDS_HPP
#define LEVYSPEC_CLI_COMMANDS_HPP

#include <iosfwd>

namespace levyspec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitUnconverged = 2;

/// Entry point for the levyspec tool: solve, sweep, analyze, units,
/// oracle-compare, bench, reference.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace levyspec::cli

#endif  // LEVYSPEC_CLI_COMMANDS_HPP
