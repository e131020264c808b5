#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flm::cli {

/// Runs the flmtest command line (`args` excludes the program name) and
/// returns the exit status. Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flm::cli
