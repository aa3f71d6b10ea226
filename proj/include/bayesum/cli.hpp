#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bayesum {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one command line (without the program name): ingest, fit, rank, eval,
/// noise or synth. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bayesum
