#pragma once

// Run configuration for `gcs simulate` and `gcs scan`. YAML, or JSON (which
// yaml-cpp reads as a YAML subset); grammar in docs/config.md.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gcs/integrator.hpp"
#include "gcs/phase_space.hpp"

namespace gcs::cli {

/// Config problems; what() carries "path:line:col: message".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScanAxis {
  std::string name;  // tol | dt | t_end | seed | angle_scale | momentum_spread
  std::vector<double> values;
};

struct RunConfig {
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<double> angles_S;
  std::vector<double> angles_T;
  SamplingOptions sampling;
  /// Explicit initial state; when set, seed/orbits/sampling are not used.
  std::optional<State> state;
  IntegratorConfig integrator;
  std::filesystem::path out_dir = "out";
  std::string prefix = "trajectory";
  bool reversal_check = true;
  std::vector<ScanAxis> scan;
  unsigned scan_threads = 0;
  std::string source;
};

RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Explicit state or a random_state draw from the orbits.
State initial_state(const RunConfig& cfg);

inline const std::vector<std::string>& scan_axis_names() {
  static const std::vector<std::string> names{"tol", "dt", "t_end", "seed", "angle_scale", "momentum_spread"};
  return names;
}

/// cfg with one grid point's values substituted.
RunConfig apply_scan_point(const RunConfig& cfg, const std::vector<std::pair<std::string, double>>& point);

}  // namespace gcs::cli
