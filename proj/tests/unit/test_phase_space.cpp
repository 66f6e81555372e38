#include <gtest/gtest.h>

#include <algorithm>

#include "../oracles/oracles.hpp"
#include "gcs/phase_space.hpp"
#include "helpers.hpp"

using namespace gcs;

TEST(PhaseSpace, PairIndexIsRowMajorUpperTriangle) {
  const int n = 5;
  int expected = 0;
  for (const auto& p : upper_pairs(n)) EXPECT_EQ(pair_index(n, p.i, p.j), expected++);
  EXPECT_EQ(expected, pair_count(n));
}

TEST(PhaseSpace, SpinsAreExactlyAntisymmetric) {
  const State s = testing_support::sample(4, 3);
  EXPECT_EQ((s.S() + s.S().transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((s.T() + s.T().transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(s.s(2, 1), -s.s(1, 2));
}

TEST(PhaseSpace, CoordinatesRoundTrip) {
  const State s = testing_support::sample(5, 1);
  EXPECT_EQ(State::from_coordinates(5, s.coordinates()), s);
  EXPECT_EQ(s.dimension(), 2 * 5 + 5 * 4);
}

TEST(PhaseSpace, ConstructorRejectsBadSizes) {
  EXPECT_THROW(State(Vec::Zero(1), Vec::Zero(1), Vec(), Vec()), std::invalid_argument);
  EXPECT_THROW(State(Vec::Zero(3), Vec::Zero(3), Vec::Zero(2), Vec::Zero(3)), std::invalid_argument);
}

TEST(PhaseSpace, FromMatricesRejectsSymmetricPart) {
  Mat S = Mat::Zero(2, 2);
  S(0, 1) = 1.0;
  S(1, 0) = 1.0;
  EXPECT_THROW(State::from_matrices(Vec{{1.0, -1.0}}, Vec::Zero(2), S, Mat::Zero(2, 2)), InvalidState);
}

TEST(ValidateState, ZeroSpinSymmetricStateIsValid) {
  EXPECT_TRUE(validate_state(testing_support::two_body(1, -1, 0, 0, 0, 0)).empty());
}

TEST(ValidateState, WrongOrder) {
  const RawState raw{Vec{{-1.0, 1.0}}, Vec::Zero(2), Mat::Zero(2, 2), Mat::Zero(2, 2)};
  EXPECT_EQ(validate_state(raw), std::vector<std::string>{"ordering violated"});
}

TEST(ValidateState, NotAntisymmetric) {
  Mat S = Mat::Zero(2, 2);
  S(0, 1) = 1.0;
  S(1, 0) = 1.0;
  const RawState raw{Vec{{1.0, -1.0}}, Vec::Zero(2), S, Mat::Zero(2, 2)};
  EXPECT_EQ(validate_state(raw), std::vector<std::string>{"antisymmetry violated"});
}

TEST(ValidateState, ReportsEveryViolation) {
  Mat S = Mat::Zero(3, 3);
  S(0, 1) = 1.0;
  const RawState raw{Vec{{0.0, 0.0, 1.0}}, Vec::Zero(3), S, Mat::Zero(3, 3)};
  const auto v = validate_state(raw);
  for (const char* msg : {"antisymmetry violated", "ordering violated", "separation violated"}) {
    EXPECT_NE(std::find(v.begin(), v.end(), msg), v.end()) << msg;
  }
  const RawState bad_dims{Vec::Zero(3), Vec::Zero(2), Mat::Zero(3, 3), Mat::Zero(3, 3)};
  EXPECT_EQ(validate_state(bad_dims), std::vector<std::string>{"dimension mismatch"});
}

TEST(ValidateState, SeparationFloor) {
  const State s = testing_support::two_body(1e-7, -1e-7, 0, 0, 0, 0);
  EXPECT_EQ(validate_state(s), std::vector<std::string>{"separation violated"});
  EXPECT_TRUE(validate_state(s, 1e-8).empty());
}

TEST(OrbitSpec, Invariants) {
  EXPECT_NO_THROW(OrbitSpec(4, {2.0, 1.0}));
  EXPECT_THROW(OrbitSpec(4, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(OrbitSpec(4, {2.0}), std::invalid_argument);
  EXPECT_THROW(OrbitSpec(3, {-1.0}), std::invalid_argument);
  EXPECT_EQ(OrbitSpec::canonical(4, {-1.0, 2.0}).angles(), (std::vector<double>{2.0, 1.0}));
  EXPECT_EQ(generic_orbit_dimension(4), 4);
  EXPECT_EQ(generic_orbit_dimension(5), 8);
}

TEST(CanonicalSoMatrix, SingleBlock) {
  const Mat c = canonical_so_matrix(OrbitSpec(2, {0.7}));
  EXPECT_EQ(c, (Mat(2, 2) << 0.0, 0.7, -0.7, 0.0).finished());
}

TEST(CanonicalSoMatrix, OddSizeHasZeroMode) {
  const Mat c = canonical_so_matrix(OrbitSpec(3, {1.3}));
  EXPECT_EQ(c.row(2).cwiseAbs().sum() + c.col(2).cwiseAbs().sum(), 0.0);
  EXPECT_EQ(Eigen::FullPivLU<Mat>(c).rank(), 2);
  EXPECT_EQ(c + c.transpose(), Mat::Zero(3, 3));
}

TEST(CanonicalSoMatrix, SpectrumFromIndependentEigensolver) {
  const Mat c = canonical_so_matrix(OrbitSpec(4, {2.0, 1.0}));
  auto ev = oracle::eigenvalues(c);
  std::vector<double> im;
  for (const auto& z : ev) {
    EXPECT_NEAR(z.real(), 0.0, 1e-14);
    im.push_back(z.imag());
  }
  std::sort(im.begin(), im.end());
  const std::vector<double> expected{-2.0, -1.0, 1.0, 2.0};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(im[i], expected[i], 1e-14);
}

TEST(RandomState, ZeroOrbitGivesZeroSpins) {
  for (std::uint64_t seed : {0u, 5u, 99u}) {
    const State s = random_state(OrbitSpec::zero(5), OrbitSpec::zero(5), seed);
    EXPECT_EQ(s.s_upper().cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(s.t_upper().cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(RandomState, TraceOfSquareMatchesOrbit) {
  // tr C^2 for one block of angle theta is -2 theta^2.
  const State s = random_state(OrbitSpec(3, {1.0}), OrbitSpec(3, {0.5}), 17);
  EXPECT_NEAR((s.S() * s.S()).trace(), -2.0, 1e-12);
  EXPECT_NEAR((s.T() * s.T()).trace(), -0.5, 1e-12);
}

TEST(RandomState, DeterministicForSeed) {
  const OrbitSpec a(4, {1.5, 0.2}), b(4, {0.9, 0.8});
  const State s1 = random_state(a, b, 1234);
  const State s2 = random_state(a, b, 1234);
  EXPECT_EQ(s1, s2);
  EXPECT_FALSE(s1 == random_state(a, b, 1235));
}

TEST(RandomState, CasimirsMatchCanonicalForm) {
  for (int n : {2, 3, 4, 5, 6}) {
    std::vector<double> angles;
    for (int j = 0; j < n / 2; ++j) angles.push_back(2.0 - 0.3 * j);
    const OrbitSpec spec(n, angles);
    const Mat c = canonical_so_matrix(spec);
    const State s = random_state(spec, spec, 40 + static_cast<std::uint64_t>(n));
    for (int m = 1; m <= n / 2; ++m) {
      const double ref = trace_power(c, 2 * m);
      EXPECT_NEAR(trace_power(s.S(), 2 * m), ref, 1e-12 * std::abs(ref)) << n << " " << m;
      EXPECT_NEAR(trace_power(s.T(), 2 * m), ref, 1e-12 * std::abs(ref)) << n << " " << m;
    }
  }
}

TEST(RandomState, RotationsAreSpecialOrthogonal) {
  std::mt19937_64 rng(3);
  for (int n : {2, 3, 4, 7}) {
    const Mat q = random_special_orthogonal(n, rng);
    EXPECT_LT((q.transpose() * q - Mat::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_NEAR(q.determinant(), 1.0, 1e-13);
  }
}

TEST(RandomState, ThousandSeedSweepIsValid) {
  const OrbitSpec a(4, {1.2, 0.4}), b(4, {0.8, 0.1});
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const State s = random_state(a, b, seed);
    ASSERT_TRUE(validate_state(s).empty()) << seed;
    ASSERT_LE(s.v().cwiseAbs().maxCoeff(), 1.0);
    ASSERT_LE(s.u().cwiseAbs().maxCoeff(), 2.0);
  }
}

TEST(RandomState, ImpossibleSeparationThrows) {
  SamplingOptions opts;
  opts.position_spread = 1e-3;
  opts.sep_min = 0.1;
  opts.max_redraws = 20;
  EXPECT_THROW(random_state(OrbitSpec::zero(4), OrbitSpec::zero(4), 1, opts), Error);
}
