#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qstrat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitDomainError = 3;

/// Runs the command line `args` (without the program name). Normal output
/// goes to `out`; errors are written to `err` as {"error":{...}} JSON.
/// Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qstrat::cli
