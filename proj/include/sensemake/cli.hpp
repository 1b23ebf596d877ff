#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sensemake {

/// Run one CLI invocation. `args` excludes the program name. Returns the
/// process exit code: 0 success, 1 bad input, 2 failed run (impossible
/// evidence, problem too large).
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sensemake
