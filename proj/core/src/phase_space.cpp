#include "gcs/phase_space.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace gcs {

InvalidState::InvalidState(std::vector<std::string> violations)
    : Error([&] {
        std::string msg = "invalid state:";
        for (const auto& v : violations) msg += " " + v + ";";
        return msg;
      }()),
      violations_(std::move(violations)) {}

std::vector<IndexPair> upper_pairs(int n) {
  std::vector<IndexPair> out;
  out.reserve(static_cast<std::size_t>(pair_count(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) out.push_back({i, j});
  }
  return out;
}

Mat antisymmetric_from_upper(int n, const Vec& upper) {
  Mat m = Mat::Zero(n, n);
  int p = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++p) {
      m(i, j) = upper(p);
      m(j, i) = -upper(p);
    }
  }
  return m;
}

Vec upper_of(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  Vec out(pair_count(n));
  int p = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) out(p++) = m(i, j);
  }
  return out;
}

State::State(Vec u, Vec v, Vec s_upper, Vec t_upper)
    : u_(std::move(u)), v_(std::move(v)), s_upper_(std::move(s_upper)), t_upper_(std::move(t_upper)) {
  const auto n = u_.size();
  if (n < 2) throw std::invalid_argument("State: need at least two particles");
  const auto p = static_cast<Eigen::Index>(pair_count(static_cast<int>(n)));
  if (v_.size() != n || s_upper_.size() != p || t_upper_.size() != p) {
    throw std::invalid_argument("State: inconsistent field sizes");
  }
}

State State::from_matrices(Vec u, Vec v, const Mat& S, const Mat& T) {
  const auto n = u.size();
  if (S.rows() != n || S.cols() != n || T.rows() != n || T.cols() != n) {
    throw InvalidState({"dimension mismatch"});
  }
  if ((S + S.transpose()).cwiseAbs().maxCoeff() != 0.0 ||
      (T + T.transpose()).cwiseAbs().maxCoeff() != 0.0) {
    throw InvalidState({"antisymmetry violated"});
  }
  return State(std::move(u), std::move(v), upper_of(S), upper_of(T));
}

State State::from_coordinates(int n, const Vec& x) {
  const CoordinateLayout lay{n};
  if (x.size() != lay.size()) throw std::invalid_argument("State: coordinate vector has wrong length");
  const int p = pair_count(n);
  return State(x.segment(0, n), x.segment(n, n), x.segment(2 * n, p), x.segment(2 * n + p, p));
}

double State::s(int i, int j) const {
  if (i == j) return 0.0;
  return i < j ? s_upper_(pair_index(n(), i, j)) : -s_upper_(pair_index(n(), j, i));
}

double State::t(int i, int j) const {
  if (i == j) return 0.0;
  return i < j ? t_upper_(pair_index(n(), i, j)) : -t_upper_(pair_index(n(), j, i));
}

Vec State::coordinates() const {
  Vec x(dimension());
  x << u_, v_, s_upper_, t_upper_;
  return x;
}

double State::min_separation() const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n(); ++i) {
    for (int j = i + 1; j < n(); ++j) best = std::min(best, std::abs(u_(i) - u_(j)));
  }
  return best;
}

bool State::operator==(const State& other) const {
  return u_.size() == other.u_.size() && u_ == other.u_ && v_ == other.v_ &&
         s_upper_ == other.s_upper_ && t_upper_ == other.t_upper_;
}

std::vector<std::string> validate_state(const RawState& raw, double sep_min) {
  std::vector<std::string> out;
  const auto n = raw.u.size();
  if (n < 2 || raw.v.size() != n || raw.S.rows() != n || raw.S.cols() != n || raw.T.rows() != n ||
      raw.T.cols() != n) {
    out.emplace_back("dimension mismatch");
    return out;
  }
  if (!raw.u.allFinite() || !raw.v.allFinite() || !raw.S.allFinite() || !raw.T.allFinite()) {
    out.emplace_back("non-finite entries");
  }
  if ((raw.S + raw.S.transpose()).cwiseAbs().maxCoeff() != 0.0 ||
      (raw.T + raw.T.transpose()).cwiseAbs().maxCoeff() != 0.0) {
    out.emplace_back("antisymmetry violated");
  }
  bool ordered = true;
  double min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (!(raw.u(i) > raw.u(i + 1))) ordered = false;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) min_gap = std::min(min_gap, std::abs(raw.u(i) - raw.u(j)));
  }
  if (!ordered) out.emplace_back("ordering violated");
  if (!(min_gap >= sep_min)) out.emplace_back("separation violated");
  return out;
}

std::vector<std::string> validate_state(const State& s, double sep_min) {
  return validate_state(RawState{s.u(), s.v(), s.S(), s.T()}, sep_min);
}

OrbitSpec::OrbitSpec(int n, std::vector<double> angles) : n_(n), angles_(std::move(angles)) {
  if (n < 1) throw std::invalid_argument("OrbitSpec: n must be positive");
  if (static_cast<int>(angles_.size()) != n / 2) {
    throw std::invalid_argument("OrbitSpec: need exactly [N/2] angles");
  }
  for (std::size_t j = 0; j < angles_.size(); ++j) {
    if (!(angles_[j] >= 0.0) || !std::isfinite(angles_[j])) {
      throw std::invalid_argument("OrbitSpec: angles must be finite and non-negative");
    }
    if (j > 0 && angles_[j] > angles_[j - 1]) {
      throw std::invalid_argument("OrbitSpec: angles must be sorted descending");
    }
  }
}

OrbitSpec OrbitSpec::canonical(int n, std::vector<double> angles) {
  for (auto& a : angles) a = std::abs(a);
  std::sort(angles.begin(), angles.end(), std::greater<>());
  return OrbitSpec(n, std::move(angles));
}

Mat canonical_so_matrix(const OrbitSpec& spec) {
  const int n = spec.n();
  Mat c = Mat::Zero(n, n);
  for (int j = 0; j < n / 2; ++j) {
    const double theta = spec.angles()[static_cast<std::size_t>(j)];
    c(2 * j, 2 * j + 1) = theta;
    c(2 * j + 1, 2 * j) = -theta;
  }
  return c;
}

State random_state(const OrbitSpec& spec_S, const OrbitSpec& spec_T, std::uint64_t seed,
                   const SamplingOptions& options) {
  if (spec_S.n() != spec_T.n()) throw std::invalid_argument("random_state: orbit sizes differ");
  if (!(options.position_spread > 0.0) || !(options.momentum_spread > 0.0)) {
    throw std::invalid_argument("random_state: spreads must be positive");
  }
  const int n = spec_S.n();
  std::mt19937_64 rng(seed);

  std::uniform_real_distribution<double> pos(-0.5 * options.position_spread, 0.5 * options.position_spread);
  Vec u(n);
  bool placed = false;
  for (int attempt = 0; attempt < options.max_redraws && !placed; ++attempt) {
    for (int i = 0; i < n; ++i) u(i) = pos(rng);
    std::sort(u.data(), u.data() + n, std::greater<>());
    placed = true;
    for (int i = 0; i + 1 < n; ++i) {
      if (!(u(i) - u(i + 1) >= options.sep_min)) placed = false;
    }
  }
  if (!placed) {
    throw Error("random_state: separation floor not reachable; position_spread too small for N");
  }

  std::uniform_real_distribution<double> mom(-options.momentum_spread, options.momentum_spread);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = mom(rng);

  const Mat qs = random_special_orthogonal(n, rng);
  const Mat qt = random_special_orthogonal(n, rng);
  const Mat S = qs * canonical_so_matrix(spec_S) * qs.transpose();
  const Mat T = qt * canonical_so_matrix(spec_T) * qt.transpose();
  return State(std::move(u), std::move(v), upper_of(S), upper_of(T));
}

State random_state(const OrbitSpec& spec_S, const OrbitSpec& spec_T, std::uint64_t seed,
                   double position_spread, double momentum_spread) {
  SamplingOptions opts;
  opts.position_spread = position_spread;
  opts.momentum_spread = momentum_spread;
  return random_state(spec_S, spec_T, seed, opts);
}

double trace_power(const Mat& x, int power) {
  if (power <= 0) return static_cast<double>(x.rows());
  Mat p = x;
  for (int k = 1; k < power; ++k) p = p * x;
  return p.trace();
}

}  // namespace gcs
