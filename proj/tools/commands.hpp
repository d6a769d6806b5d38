#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aeos::cli {

/// Runs the aeos-sched command line. Output goes to `out`, diagnostics to
/// `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aeos::cli
