#include "gcs/serialization.hpp"

#include <vector>

namespace gcs {
namespace {

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

Vec read_vector(const nlohmann::json& j, const char* key, std::size_t expected) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw Error(std::string("state json: missing array '") + key + "'");
  }
  const auto values = j.at(key).get<std::vector<double>>();
  if (values.size() != expected) {
    throw Error(std::string("state json: '") + key + "' has length " + std::to_string(values.size()) +
                ", expected " + std::to_string(expected));
  }
  return Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

nlohmann::json state_to_json(const State& s) {
  return {{"n", s.n()},
          {"u", to_std(s.u())},
          {"v", to_std(s.v())},
          {"S_upper", to_std(s.s_upper())},
          {"T_upper", to_std(s.t_upper())}};
}

State state_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.at("n").is_number_integer()) {
    throw Error("state json: missing integer 'n'");
  }
  const int n = j.at("n").get<int>();
  if (n < 2) throw Error("state json: n must be >= 2");
  const auto nn = static_cast<std::size_t>(n);
  const auto p = static_cast<std::size_t>(pair_count(n));
  return State(read_vector(j, "u", nn), read_vector(j, "v", nn), read_vector(j, "S_upper", p),
               read_vector(j, "T_upper", p));
}

std::string state_to_string(const State& s) { return state_to_json(s).dump(); }

State state_from_string(const std::string& text) {
  try {
    return state_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("state json: ") + e.what());
  }
}

}  // namespace gcs
