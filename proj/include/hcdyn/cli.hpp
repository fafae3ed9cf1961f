#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hcdyn {

/// Exit status: 0 success, 1 diagnostic (classification gap, consistency,
/// failed check), 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hcdyn
