#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace alpern::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kVerificationFailed = 1;
inline constexpr int kInvalidInput = 2;
inline constexpr int kInfeasible = 3;

// Runs the `alpern` command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace alpern::cli
