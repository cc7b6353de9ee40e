#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace surv {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDefect = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace surv
