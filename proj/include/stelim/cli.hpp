#ifndef STELIM_CLI_HPP
#define STELIM_CLI_HPP

#include <iosfwd>

namespace stelim {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitModel = 2;

/// Runs one command line (argv[0] is the program name).
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace stelim

#endif  // STELIM_CLI_HPP
