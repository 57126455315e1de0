#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace igo::cli {

/// Runs the command line `args` (without the program name). Normal output
/// goes to `out`, diagnostics to `err` as "error[<category>]: <message>".
/// Returns the process exit code: 0 on success, 1 on a runtime error, 2 on a
/// usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace igo::cli
