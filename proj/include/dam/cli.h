#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dam::cli {

// Runs one damc invocation; `args` excludes the program name. Returns the
// exit code: 0 when the query is answered true (or a witness is found, or
// a command succeeds), 1 when answered false, 2 on usage or data errors.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace dam::cli
