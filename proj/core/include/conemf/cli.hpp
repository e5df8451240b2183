#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace conemf::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 all checks pass, 1 verified violation or failure,
/// 2 input or usage error, 3 numerically indeterminate.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace conemf::cli
