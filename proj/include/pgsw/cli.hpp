#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pgsw {

/// Runs one `pgsw` invocation. `args` excludes the program name.
/// Exit status: 0 success, 1 runtime or validation failure, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The built-in invariant and oracle checks behind `pgsw selftest`; prints a pass/fail table
/// and returns true when every check passes.
bool run_selftest(std::ostream& out);

}  // namespace pgsw
