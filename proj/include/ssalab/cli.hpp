#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ssalab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitIo = 4;

// Runs one command line (without the program name). Results go to --output or
// `out`; diagnostics go to `err` as a single line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssalab::cli
