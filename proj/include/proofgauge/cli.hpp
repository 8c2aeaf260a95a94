#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace proofgauge::cli {

// Full command-line entry point. args excludes the program name.
// Exit codes: 0 success, 2 input/validation, 3 backend failure,
// 4 non-convergence at max_rounds.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace proofgauge::cli
