#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cpseg {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int input_error = 2;
inline constexpr int scorer_failure = 3;
} // namespace exit_code

/// Entry point of the `cpseg` tool; args excludes the program name.
/// Subcommands: segment, eval, simulate.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace cpseg
