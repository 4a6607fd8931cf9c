#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gridbarrier::cli {

// Process exit codes. classify and screen encode the verdict instead of kOk.
inline constexpr int kOk = 0;
inline constexpr int kValidation = 2;
inline constexpr int kIo = 3;
inline constexpr int kNumerical = 4;
inline constexpr int kPotentiallySafe = 10;
inline constexpr int kUnsafe = 20;

/// Runs one command line (args[0] is the program name) and returns the exit
/// code. Nothing is written outside `out`, `err` and the --out directory.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gridbarrier::cli
