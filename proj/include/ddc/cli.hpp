#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ddc::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_findings = 1;
inline constexpr int exit_usage = 2;

// Full dispatcher, testable without a subprocess. argv excludes the program
// name. Workspace root comes from --root, else $DDC_ROOT, else the cwd.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace ddc::cli
