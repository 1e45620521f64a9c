#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kschur::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitUsage = 64;

// args excludes the program name. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kschur::cli
