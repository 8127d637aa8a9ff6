#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace arrival::cli {

/// Runs the tool on `args` (without the program name). CSV goes to `out`
/// unless an output file or ARRIVAL_OUTPUT_DIR is given; diagnostics go to
/// `err`. Returns 0 on success, 1 on a numerical-consistency failure, 2 on a
/// usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace arrival::cli
