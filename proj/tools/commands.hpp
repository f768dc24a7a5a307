#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cdt::cli {

/// Runs the command line `args` (args[0] is the program name). Reports go to `out`,
/// diagnostics to `err`. Returns 0 on success, 1 on axiom or synthesis failure, 2 on bad input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdt::cli
