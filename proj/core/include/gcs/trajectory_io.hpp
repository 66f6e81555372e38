#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>

#include "gcs/integrator.hpp"

namespace gcs {

/// Header: t,u_1..u_N,v_1..v_N,S_12,S_13,..,T_12,..,<diag>,drift_<diag>,...
/// (one-based particle labels, diagnostics in diagnostic_names order).
std::string trajectory_csv_header(int n);

/// Values are printed with 17 significant digits; the output depends only on
/// the trajectory, so reruns are byte-identical.
void write_trajectory_csv(std::ostream& out, const Trajectory& tr);

/// Config, step counts, initial state, invariant summary and any extra fields.
nlohmann::json trajectory_metadata(const Trajectory& tr, const DriftReport& report,
                                   const nlohmann::json& extra = nlohmann::json::object());

nlohmann::json config_to_json(const IntegratorConfig& cfg);

}  // namespace gcs
