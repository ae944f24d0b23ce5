#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qforge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;     // bad flags, config or parameters
inline constexpr int kExitCell = 3;       // a grid cell cannot be evaluated
inline constexpr int kExitNumerical = 4;  // root search found no sign change / did not converge

/// Runs `quantile-forge` with argv-style arguments (args[0] is the program
/// name). Output goes to `out`, diagnostics to `err`. The simulate seed may
/// come from the QFORGE_SEED environment variable; --seed wins over it.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qforge::cli
