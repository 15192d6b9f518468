#pragma once

// Command-line front end. The subcommands are exposed as a library so that
// tests can drive them in-process and inspect the exact bytes they emit.

#include <iosfwd>
#include <string>
#include <vector>

namespace charsum::cli {

inline constexpr const char* schema_version = "1.0.0";
inline constexpr const char* tool_version = "0.1.0";

enum ExitCode : int { ok = 0, invariant_violation = 1, invalid_input = 2 };

/// Runs one command line (without the program name). Output goes to `out`
/// unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace charsum::cli
