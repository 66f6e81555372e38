#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gcs::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitRuntimeAbort = 3,
};

/// Writes <out>/<prefix>.csv and <out>/<prefix>.json, prints a drift summary.
int cmd_simulate(const std::filesystem::path& config, const std::optional<std::filesystem::path>& out_dir,
                 std::ostream& out, std::ostream& err);

struct VerifyArgs {
  bool all = false;
  std::vector<std::string> checks;
  std::vector<int> n_list{2, 3, 4, 5};
  int seeds = 20;
  std::optional<double> tol;
  std::optional<std::filesystem::path> out_dir;
  unsigned threads = 0;
};

/// JSON lines on `out`, summary on `err`; 0 iff every check passes.
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);

/// Cartesian grid of the scan axes, run concurrently; writes <prefix>_scan.csv
/// (deterministic) and <prefix>_scan.json (runtimes, timestamp). Returns 3 if
/// any point aborted, after finishing the rest.
int cmd_scan(const std::filesystem::path& config, const std::optional<std::filesystem::path>& out_dir,
             std::ostream& out, std::ostream& err);

}  // namespace gcs::cli
