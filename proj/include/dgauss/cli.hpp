#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dgauss::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
    kSuccess = 0,
    kDomainFailure = 2,
    kResourceFailure = 3,
    kUsage = 64,
};

/// Parses args (without the program name), runs the subcommand and writes the
/// table to out (or to --out). Diagnostics go to err. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dgauss::cli
