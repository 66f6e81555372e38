#pragma once

// Named identity checks over seeded random states.
//
// Each check produces one CheckResult per (check, N, seed). A check may test
// several sub-identities ("components"), each with its own limit; the reported
// residual is tolerance * max_i(value_i / limit_i), so pass <=> residual <= tolerance
// and the components are listed in details. For a single-component check the
// residual is the component's relative residual itself.

#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "gcs/phase_space.hpp"

namespace gcs {

struct CheckResult {
  std::string name;
  int n = 0;
  std::uint64_t seed = 0;
  std::optional<double> z;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  nlohmann::json details = nlohmann::json::object();
};

/// {"check", "N", "seed", "z", "residual", "tolerance", "pass", "details"}.
nlohmann::json to_json(const CheckResult& r);

/// Registered names in canonical order.
const std::vector<std::string>& check_names();
bool is_check_name(const std::string& name);
double default_tolerance(const std::string& name);

struct VerifyOptions {
  std::vector<std::string> checks;
  std::vector<int> n_list{2, 3, 4, 5};
  std::vector<std::uint64_t> seeds{0};
  /// Per-check overrides of the main tolerance.
  std::map<std::string, double> tolerances;
  /// Worker threads; 0 = hardware concurrency.
  unsigned threads = 0;
};

/// Throws std::invalid_argument for unknown check names or N < 2.
/// Results are sorted by (check order, N, seed); deterministic for fixed options.
std::vector<CheckResult> run_checks(const VerifyOptions& options);

CheckResult run_check(const std::string& name, int n, std::uint64_t seed, double tolerance);

/// The random state used by every check at (N, seed): orbit angles uniform in
/// [0.3, 2], positions spread 4 with gaps >= 0.1, momenta in [-1, 1].
State verification_state(int n, std::uint64_t seed);

/// Real spectral parameters (z, w) in (0.1, 3) with |z - w| >= 0.05.
struct SpectralPair {
  double z;
  double w;
};
template <class Rng>
SpectralPair sample_spectral_pair(Rng& rng);

}  // namespace gcs

#include <random>

namespace gcs {

template <class Rng>
SpectralPair sample_spectral_pair(Rng& rng) {
  std::uniform_real_distribution<double> dist(0.1, 3.0);
  for (;;) {
    const double z = dist(rng);
    const double w = dist(rng);
    if (std::abs(z - w) >= 0.05 && std::abs(z + w) >= 0.05) return {z, w};
  }
}

}  // namespace gcs
