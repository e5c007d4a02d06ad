#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace aegan {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitOther = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitNumerical = 4,
};

/// Environment variable naming the default root for run directories.
inline constexpr const char* kRunsDirEnv = "AEGAN_RUNS_DIR";

/// Build identifier recorded in run manifests.
const char* artifact_version();

/// Entry point of the `aegan` tool. args[0] is the program name. Normal output
/// goes to `out`, diagnostics to `err`; the return value is an ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aegan
