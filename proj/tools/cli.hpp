#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace optisph::cli {

/// Runs the command line `args` (without the program name). Returns the
/// process exit code: 0 success, 1 numeric failure, 2 usage or parse failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace optisph::cli
