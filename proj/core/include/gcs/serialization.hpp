#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "gcs/phase_space.hpp"

namespace gcs {

/// {"n": N, "u": [...], "v": [...], "S_upper": [...], "T_upper": [...]}, spin
/// entries row-major over i < j. Doubles are written as shortest round-trip
/// decimals, so from_json(to_json(s)) == s bit for bit.
nlohmann::json state_to_json(const State& s);

/// Throws gcs::Error on missing keys or wrong lengths.
State state_from_json(const nlohmann::json& j);

std::string state_to_string(const State& s);
State state_from_string(const std::string& text);

}  // namespace gcs
