#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace monoreg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitCertificate = 2;

/// Parses `args` (without the program name) and runs one subcommand.
/// Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace monoreg::cli
