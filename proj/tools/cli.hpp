#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dmspec::cli {

/// Runs the command line `args` (without the program name). Returns the exit
/// code: 0 success, 1 failed check or computation error, 2 usage or config error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dmspec::cli
