#pragma once

#include <random>

#include "gcs/phase_space.hpp"

namespace testing_support {

/// Random orbit angles in [0.3, 2] and a state with gaps >= 0.1.
inline gcs::State sample(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed + 1000 * static_cast<std::uint64_t>(n));
  std::uniform_real_distribution<double> angle(0.3, 2.0);
  std::vector<double> a(static_cast<std::size_t>(n / 2)), b(a.size());
  for (auto& x : a) x = angle(rng);
  for (auto& x : b) x = angle(rng);
  gcs::SamplingOptions opts;
  opts.sep_min = 0.1;
  return gcs::random_state(gcs::OrbitSpec::canonical(n, a), gcs::OrbitSpec::canonical(n, b), rng(), opts);
}

inline gcs::State two_body(double u1, double u2, double v1, double v2, double s12, double t12) {
  return gcs::State(gcs::Vec{{u1, u2}}, gcs::Vec{{v1, v2}}, gcs::Vec{{s12}}, gcs::Vec{{t12}});
}

}  // namespace testing_support
