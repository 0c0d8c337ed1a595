#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spillscope::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartialFailure = 1;  // some batch applications failed
inline constexpr int kExitUsage = 2;           // usage, schema or input errors

// Environment variable selecting diagnostic verbosity on stderr:
// off, error, warn (default), info, debug.
inline constexpr const char* kLogEnv = "SPILLSCOPE_LOG";

// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spillscope::cli
