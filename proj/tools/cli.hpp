#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace graphseg::cli {

enum ExitCode : int { ok = 0, validation_failed = 2, not_converged = 3 };

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace graphseg::cli
