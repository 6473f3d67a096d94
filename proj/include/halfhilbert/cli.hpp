#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace halfhilbert::cli {

/// Stable exit codes.
enum ExitCode : int { ok = 0, validation = 2, convergence = 3, failure = 4 };

/// Runs one subcommand; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace halfhilbert::cli
