#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mixlab::cli {

/// Stable process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitVerificationFailure = 1,
    kExitParameterError = 2,
    kExitUsageError = 64,
};

/// Runs one command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mixlab::cli
