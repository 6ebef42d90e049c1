#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trk::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kIoError = 1;
inline constexpr int kNoFixes = 2;
inline constexpr int kUsage = 64;
inline constexpr int kDataError = 65;

// args[0] is the program name. Regular output goes to `out`; diagnostics
// and run metadata go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trk::cli
