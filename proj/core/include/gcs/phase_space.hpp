#pragma once

// Reduced phase space of the two-spin Calogero-Sutherland system: particle
// positions u, momenta v and two real antisymmetric so(N) spin matrices S, T.
//
// Spin matrices are stored through their strictly upper triangular entries in
// row-major order (0,1), (0,2), ..., (0,N-1), (1,2), ...; the full matrices
// are materialized on demand and are antisymmetric by construction.
//
// All indices in this library are zero-based.

#include <cstdint>
#include <string>
#include <vector>

#include "gcs/linalg.hpp"

namespace gcs {

inline constexpr double kDefaultSepMin = 1e-6;

constexpr int pair_count(int n) { return n * (n - 1) / 2; }

/// Position of (i, j), i < j, in strictly-upper-triangular row-major storage.
constexpr int pair_index(int n, int i, int j) { return i * n - i * (i + 1) / 2 + (j - i - 1); }

struct IndexPair {
  int i;
  int j;
};

/// All (i, j) with i < j in storage order.
std::vector<IndexPair> upper_pairs(int n);

/// Antisymmetric matrix from its strictly upper entries.
Mat antisymmetric_from_upper(int n, const Vec& upper);
Vec upper_of(const Mat& m);

class State {
 public:
  /// Throws std::invalid_argument on inconsistent sizes or n < 2.
  State(Vec u, Vec v, Vec s_upper, Vec t_upper);

  /// Throws InvalidState("antisymmetry violated") unless S and T are exactly antisymmetric.
  static State from_matrices(Vec u, Vec v, const Mat& S, const Mat& T);

  /// Inverse of coordinates(): [u, v, S_upper, T_upper].
  static State from_coordinates(int n, const Vec& x);

  int n() const { return static_cast<int>(u_.size()); }
  int pairs() const { return pair_count(n()); }
  /// Number of independent phase-space coordinates, 2N + N(N-1).
  int dimension() const { return 2 * n() + 2 * pairs(); }

  const Vec& u() const { return u_; }
  const Vec& v() const { return v_; }
  const Vec& s_upper() const { return s_upper_; }
  const Vec& t_upper() const { return t_upper_; }

  Mat S() const { return antisymmetric_from_upper(n(), s_upper_); }
  Mat T() const { return antisymmetric_from_upper(n(), t_upper_); }

  /// Full-matrix entries, antisymmetry applied.
  double s(int i, int j) const;
  double t(int i, int j) const;

  Vec coordinates() const;

  /// Smallest |u_j - u_k| over all pairs.
  double min_separation() const;

  bool operator==(const State& other) const;

 private:
  Vec u_, v_, s_upper_, t_upper_;
};

/// Flat coordinate offsets inside State::coordinates().
struct CoordinateLayout {
  int n;
  int u(int i) const { return i; }
  int v(int i) const { return n + i; }
  int s(int pair) const { return 2 * n + pair; }
  int t(int pair) const { return 2 * n + pair_count(n) + pair; }
  int size() const { return 2 * n + 2 * pair_count(n); }
};

/// Unvalidated state data with full spin matrices, used for diagnostics.
struct RawState {
  Vec u, v;
  Mat S, T;
};

/// Every violated invariant, empty when the data is a valid State.
/// Messages: "dimension mismatch", "non-finite entries", "antisymmetry violated",
/// "ordering violated", "separation violated".
std::vector<std::string> validate_state(const RawState& raw, double sep_min = kDefaultSepMin);
std::vector<std::string> validate_state(const State& s, double sep_min = kDefaultSepMin);

/// Spectral data of an so(N) coadjoint orbit: block angles theta_1 >= ... >= 0,
/// [N/2] of them.
class OrbitSpec {
 public:
  /// Throws std::invalid_argument unless angles are non-negative, sorted
  /// descending and of length n/2.
  OrbitSpec(int n, std::vector<double> angles);

  /// Accepts any order and sign, returns the canonical representative.
  static OrbitSpec canonical(int n, std::vector<double> angles);
  static OrbitSpec zero(int n) { return OrbitSpec(n, std::vector<double>(n / 2, 0.0)); }

  int n() const { return n_; }
  const std::vector<double>& angles() const { return angles_; }

 private:
  int n_;
  std::vector<double> angles_;
};

/// Dimension of a generic so(N) coadjoint orbit, N(N-1)/2 - [N/2].
constexpr int generic_orbit_dimension(int n) { return pair_count(n) - n / 2; }

/// Block-diagonal representative diag([[0, t_j], [-t_j, 0]]) with a trailing
/// zero row and column for odd N.
Mat canonical_so_matrix(const OrbitSpec& spec);

struct SamplingOptions {
  double position_spread = 4.0;
  double momentum_spread = 1.0;
  double sep_min = kDefaultSepMin;
  int max_redraws = 1000;
};

/// Random element of SO(N): QR of a Gaussian matrix with the R-diagonal sign
/// fix, then a column flip if det = -1.
template <class Rng>
Mat random_special_orthogonal(int n, Rng& rng);

/// Seeded sample on the product of the two orbits. Positions are sorted
/// descending in [-spread/2, spread/2]; throws gcs::Error when the separation
/// floor cannot be met within max_redraws.
State random_state(const OrbitSpec& spec_S, const OrbitSpec& spec_T, std::uint64_t seed,
                   const SamplingOptions& options = {});

State random_state(const OrbitSpec& spec_S, const OrbitSpec& spec_T, std::uint64_t seed,
                   double position_spread, double momentum_spread);

/// tr(X^power) by repeated multiplication.
double trace_power(const Mat& x, int power);

}  // namespace gcs

#include "gcs/detail/random_special_orthogonal.ipp"
