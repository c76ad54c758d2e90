#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace adlmine::cli {

// Runs one command line (without the program name). Returns the exit status:
// 0 success, 1 data error, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adlmine::cli
