#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cycles {

/// Runs one CLI invocation. args excludes the program name. Returns 0 on
/// success, 1 on a domain error (message on err), 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cycles
