#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nprev/io.hpp"

namespace nprev {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit statuses of np-revolve.
enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,
  exit_config = 2,
  exit_geometry = 3,
  exit_numerical = 4,
};

struct CliOptions {
  std::string config_path;
  std::string out_dir;  // overrides output_dir from the config
  int threads = 1;
};

/// Runs one command and writes its artifacts plus manifest.json.
/// Returns the list of files written (relative to the output directory).
std::vector<std::string> run(const RunConfig& config, const CliOptions& opts);

/// Validates every .csv/.json/.bin file in `dir` (or the given files).
/// Returns the number of files checked.
int validate_outputs(const std::vector<std::string>& paths);

/// Full command-line entry point; maps exceptions to exit codes and prints
/// one diagnostic line to `err`.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace nprev
