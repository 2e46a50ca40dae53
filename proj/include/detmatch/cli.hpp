#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace detmatch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

// Entry point behind the detmatch executable. args[0] is the program name.
// Results go to the files named by flags; diagnostics and the compare
// summary go to `err`.
int run(const std::vector<std::string>& args, std::ostream& err);

}  // namespace detmatch::cli
