#include "gcs/trajectory_io.hpp"

#include <iomanip>
#include <ostream>

#include "gcs/serialization.hpp"

namespace gcs {

std::string trajectory_csv_header(int n) {
  std::string h = "t";
  for (int i = 1; i <= n; ++i) h += ",u_" + std::to_string(i);
  for (int i = 1; i <= n; ++i) h += ",v_" + std::to_string(i);
  for (const char* spin : {"S_", "T_"}) {
    for (const auto& p : upper_pairs(n)) h += "," + std::string(spin) + std::to_string(p.i + 1) + std::to_string(p.j + 1);
  }
  for (const auto& name : diagnostic_names(n)) h += "," + name + ",drift_" + name;
  return h;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  const int n = tr.n();
  out << trajectory_csv_header(n) << '\n';
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(17);
  const Diagnostics& first = tr.diagnostics.front();
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    out << tr.times[k];
    const Vec x = tr.states[k].coordinates();
    for (Eigen::Index i = 0; i < x.size(); ++i) out << ',' << x(i);
    const Diagnostics& d = tr.diagnostics[k];
    for (std::size_t i = 0; i < d.values.size(); ++i) {
      out << ',' << d.values[i] << ',' << relative_drift(d.values[i], first.values[i], first.scales[i]);
    }
    out << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

nlohmann::json config_to_json(const IntegratorConfig& cfg) {
  return {{"method", to_string(cfg.method)}, {"t_end", cfg.t_end},
          {"dt", cfg.dt},                    {"tol", cfg.tol},
          {"probe_z", cfg.probe_z},          {"sample_stride", cfg.sample_stride},
          {"sep_min", cfg.sep_min},          {"max_consecutive_rejections", cfg.max_consecutive_rejections}};
}

nlohmann::json trajectory_metadata(const Trajectory& tr, const DriftReport& report, const nlohmann::json& extra) {
  nlohmann::json drifts = nlohmann::json::object();
  for (std::size_t i = 0; i < report.names.size(); ++i) drifts[report.names[i]] = report.max_drift[i];
  nlohmann::json initial = nlohmann::json::object();
  nlohmann::json final_values = nlohmann::json::object();
  for (std::size_t i = 0; i < report.names.size(); ++i) {
    initial[report.names[i]] = tr.diagnostics.front().values[i];
    final_values[report.names[i]] = tr.diagnostics.back().values[i];
  }
  nlohmann::json meta = {
      {"n", tr.n()},
      {"integrator", config_to_json(tr.config)},
      {"samples", tr.states.size()},
      {"accepted_steps", tr.accepted_steps},
      {"rejected_steps", tr.rejected_steps},
      {"initial_state", state_to_json(tr.states.front())},
      {"invariants", {{"initial", initial}, {"final", final_values}, {"max_relative_drift", drifts}}},
      {"worst_drift", report.worst_drift},
  };
  if (report.reversal_mismatch >= 0.0) meta["reversal_mismatch"] = report.reversal_mismatch;
  for (const auto& [key, value] : extra.items()) meta[key] = value;
  return meta;
}

}  // namespace gcs
