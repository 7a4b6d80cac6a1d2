#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace freezing {

/// Runs the freezing-dyson command line. `args` excludes the program name.
/// Returns the process exit code: 0 ok, 2 usage or parameter error,
/// 3 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace freezing
