#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lissajous::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kBadInput = 2;
inline constexpr int kNotHypersurface = 3;
inline constexpr int kGuard = 4;
inline constexpr int kNoConvergence = 5;

/// Runs one command; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace lissajous::cli
