#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hardy {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand: z-eval, sieve, saddle, moment, compare, expsum, msq, suite.
/// args excludes the program name.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_dispatch(int argc, char** argv);

}  // namespace hardy
