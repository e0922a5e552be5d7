#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace despeckle::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitUsageError = 2;

/// Runs one `despeckle` subcommand: phantom, corrupt, filter, metrics,
/// montecarlo or report. `args` excludes the program name. Returns 0 on
/// success, 2 on usage errors and 1 on runtime errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace despeckle::cli
