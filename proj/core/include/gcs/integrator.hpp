#pragma once

#include <string>
#include <vector>

#include "gcs/phase_space.hpp"

namespace gcs {

enum class Method {
  kFixedRk4,
  kAdaptiveDormandPrince,
};

std::string to_string(Method m);
/// Accepts "rk4" / "fixed-rk4" and "adaptive" / "adaptive-embedded" / "dopri5".
Method method_from_string(const std::string& name);

struct IntegratorConfig {
  Method method = Method::kAdaptiveDormandPrince;
  double t_end = 10.0;
  /// Fixed step (rk4) or initial step hint (adaptive; <= 0 picks one).
  double dt = 1e-2;
  /// Per-step bound on max_i |err_i| / (1 + |x_i|), adaptive only.
  double tol = 1e-10;
  double probe_z = 0.7;
  int sample_stride = 1;
  double sep_min = kDefaultSepMin;
  int max_consecutive_rejections = 50;

  /// Throws std::invalid_argument: tol in (1e-15, 1e-3), dt > 0, t_end > 0, stride >= 1.
  void validate() const;
};

/// Invariants tracked along a trajectory, see diagnostic_names().
struct Diagnostics {
  std::vector<double> values;
  /// Magnitude of the terms making up each value (sum of |terms| or a norm power).
  std::vector<double> scales;
  double step_size = 0.0;
  double error_estimate = 0.0;
};

/// "H", "trL2".."trLN" at the probe z, "trT2", "trT4", ..., "trS2", "trS4", ...
std::vector<std::string> diagnostic_names(int n);
Diagnostics diagnose(const State& s, double probe_z);

struct Trajectory {
  IntegratorConfig config;
  std::vector<double> times;
  std::vector<State> states;
  std::vector<Diagnostics> diagnostics;
  long accepted_steps = 0;
  long rejected_steps = 0;

  int n() const { return states.empty() ? 0 : states.front().n(); }
};

/// A fixed step that crosses the separation floor is retried as 2, 4, .., 2^16
/// substeps. Throws CollisionError after max_consecutive_rejections rejected attempts
/// and StepUnderflowError when the step collapses below 1e-14 (1 + |t|).
Trajectory integrate(const State& s0, const IntegratorConfig& cfg);

/// (u, v, S, T) -> (u, -v, -S, -T); maps solutions to time-reversed solutions.
State time_reversed(const State& s);

/// Drifts are measured against max(|x(0)|, 1e-2 * scale(0)) so that invariants
/// that start near zero through cancellation are judged on their term size.
inline constexpr double kDriftScaleFloor = 1e-2;

double relative_drift(double value, double initial, double initial_scale);

struct DriftReport {
  std::vector<std::string> names;
  std::vector<double> max_drift;
  double worst_drift = 0.0;
  /// Max |x| mismatch after integrating the time-reversed endpoint back; < 0 if skipped.
  double reversal_mismatch = -1.0;

  double drift(const std::string& name) const;
};

DriftReport drift_report(const Trajectory& tr, bool with_reversal = true);

}  // namespace gcs
