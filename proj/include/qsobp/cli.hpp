#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qsobp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitIo = 3;

/// Runs one command line (args[0] is the program name). Non-convergence is a
/// result and exits 0; bad input exits 2; file errors exit 3.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qsobp::cli
