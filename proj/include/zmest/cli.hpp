#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zmest {

// Full command-line surface; `args` excludes the program name. Returns
// the process exit code: 0 success, 1 domain failure, 2 input/parse
// error, 3 budget/resource error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zmest
