#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace movframe::cli {

enum ExitCode : int { pass = 0, check_failed = 1, usage_error = 2 };

/// Runs one subcommand. `args` excludes the program name. Reports go to
/// `out` unless --out names a directory; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace movframe::cli
