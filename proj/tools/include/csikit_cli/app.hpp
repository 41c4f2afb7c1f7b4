#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace csikit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitUsage = 64;

/// Parses the command line and runs one subcommand. Never throws; failures
/// are reported on `err` and mapped to the exit codes above.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace csikit::cli
