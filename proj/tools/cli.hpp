#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dgglue {

/// Exit codes: 0 all checks pass, 1 a mathematical check failed,
/// 2 input or validation error, 3 resolution depth cap exceeded.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dgglue
