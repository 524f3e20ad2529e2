#ifndef SIT_CLI_HPP
#define SIT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace sit::cli {

enum ExitCode : int { kOk = 0, kTypeError = 1, kParseError = 2, kUsage = 3, kFuel = 4 };

/// Runs the compiler driver on `args` (without the program name). Results
/// go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sit::cli

#endif  // SIT_CLI_HPP
