#include <gtest/gtest.h>

#include "../oracles/oracles.hpp"
#include "gcs/brackets.hpp"
#include "gcs/dynamics.hpp"
#include "gcs/lax.hpp"
#include "helpers.hpp"

using namespace gcs;
using testing_support::sample;

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();

State zero_spin(int n) {
  Vec u(n), v(n);
  for (int i = 0; i < n; ++i) {
    u(i) = 1.5 * (n - i);
    v(i) = 0.3 * i - 0.4;
  }
  return State(u, v, Vec::Zero(pair_count(n)), Vec::Zero(pair_count(n)));
}
}  // namespace

TEST(LaxL, FreeCaseIsDiagonal) {
  const State s = zero_spin(4);
  for (double z : {0.3, 1.7, -2.0}) EXPECT_EQ(lax_L(s, z), Mat(s.v().asDiagonal()));
}

TEST(LaxL, TraceIsTotalMomentum) {
  const State s = sample(5, 3);
  for (double z : {0.2, 0.9, 2.5}) EXPECT_NEAR(lax_L(s, z).trace(), s.v().sum(), 1e-14);
  EXPECT_NEAR(std::real(lax_L(s, Complex(0.4, 0.7)).trace()), s.v().sum(), 1e-14);
}

TEST(LaxL, MatchesEntrywiseOracle) {
  for (int n : {2, 3, 5}) {
    const State s = sample(n, 1);
    const Mat L = lax_L(s, 0.8);
    EXPECT_LE((L - oracle::lax_L(s, 0.8)).cwiseAbs().maxCoeff(), 1e-14 * L.cwiseAbs().maxCoeff());
  }
}

TEST(LaxL, TwoRepresentationsAgree) {
  const State s = sample(4, 2);
  for (double z : {0.15, 1.0, 2.9}) {
    const Mat L = lax_L(s, z);
    const Mat alt = eta_tilde(s) - (1.0 + 1.0 / std::tanh(z)) * s.T();
    EXPECT_LE((L - alt).cwiseAbs().maxCoeff(), 1e-14 * L.cwiseAbs().maxCoeff());
  }
}

TEST(LaxL, LargeZLimit) {
  // coth(20) - 1 ~ 8.5e-18.
  const State s = sample(3, 4);
  const Mat lim = eta_tilde(s) - 2.0 * s.T();
  EXPECT_LE((lax_L(s, 20.0) - lim).cwiseAbs().maxCoeff(), 1e-15 * std::max(1.0, lim.cwiseAbs().maxCoeff()));
}

TEST(LaxL, PoleThrows) {
  EXPECT_THROW(lax_L(sample(3, 1), 0.0), PoleError);
  EXPECT_THROW(lax_L(sample(3, 1), Complex(0.0, M_PI)), PoleError);
}

TEST(LaxM, Examples) {
  EXPECT_EQ(lax_M(zero_spin(3)), Mat::Zero(3, 3));
  const State s = sample(5, 6);
  const Mat M = lax_M(s);
  EXPECT_EQ(M + M.transpose(), Mat::Zero(5, 5));
  EXPECT_LE((M - oracle::lax_M(s)).cwiseAbs().maxCoeff(), 1e-14 * M.cwiseAbs().maxCoeff());
  // (0.5 - cosh 2) / sinh^2 2 at 30 digits.
  const State two(Vec{{1.0, -1.0}}, Vec::Zero(2), Vec{{1.0}}, Vec{{0.5}});
  EXPECT_NEAR(lax_M(two)(0, 1), -0.247998085726048584, 1e-15);
}

TEST(LaxM, IsDerivativeOfLInFirstPosition) {
  // dL_ij/du_i = M_ij for i != j, checked by central differences.
  const State s = sample(3, 5);
  const double h = 1e-6;
  Vec x = s.coordinates();
  x(0) += h;
  const Mat Lp = lax_L(State::from_coordinates(3, x), 0.9);
  x(0) -= 2 * h;
  const Mat Lm = lax_L(State::from_coordinates(3, x), 0.9);
  const Mat d = (Lp - Lm) / (2 * h);
  const Mat M = lax_M(s);
  for (int j = 1; j < 3; ++j) EXPECT_NEAR(d(0, j), M(0, j), 1e-7 * std::max(1.0, std::abs(M(0, j))));
}

TEST(LaxResidual, FreeCaseVanishes) {
  EXPECT_EQ(lax_residual(zero_spin(4), 0.7).residual, 0.0);
}

TEST(LaxResidual, RandomState) {
  const State s = sample(4, 9);
  const auto r = lax_residual(s, 0.7);
  EXPECT_LE(r.residual, 1e-12 * r.scale);
}

TEST(LaxResidual, UniformInZ) {
  const State s = sample(4, 10);
  const double single = lax_residual(s, 0.7).relative();
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) worst = std::max(worst, lax_residual(s, 0.1 + 2.9 * (k + 0.5) / 20).relative());
  const double rounding = 64 * kEps;
  EXPECT_LE(std::abs(worst - single), 10 * rounding);
}

TEST(LaxResidual, ComplexSpectralParameter) {
  const State s = sample(4, 11);
  const auto r = lax_residual(s, Complex(0.6, 0.9));
  EXPECT_LE(r.residual, 1e-12 * r.scale);
}

TEST(LaxResidual, TimeDerivativeAgreesWithFiniteDifferenceAlongFlow) {
  // dL/dt by the chain rule versus (L(x + h f) - L(x - h f)) / 2h.
  const State s = sample(3, 12);
  const Vec f = eom(s).flat();
  const double h = 1e-6;
  const Mat Lp = lax_L(State::from_coordinates(3, s.coordinates() + h * f), 1.2);
  const Mat Lm = lax_L(State::from_coordinates(3, s.coordinates() - h * f), 1.2);
  const Mat dL = lax_time_derivative(s, 1.2, eom(s));
  EXPECT_LE(((Lp - Lm) / (2 * h) - dL).cwiseAbs().maxCoeff(), 1e-6 * dL.cwiseAbs().maxCoeff());
}

TEST(SpectralInvariants, FreeCase) {
  const State s = zero_spin(4);
  const Vec t = spectral_invariants(s, 0.5, 4);
  for (int k = 2; k <= 4; ++k) EXPECT_NEAR(t(k - 2), s.v().array().pow(k).sum(), 1e-14);
}

TEST(SpectralInvariants, GradientMatchesFiniteDifferences) {
  const State s = sample(4, 13);
  for (int k = 2; k <= 4; ++k) {
    const Vec g = spectral_invariant_gradient(s, 0.8, k);
    const Vec fd = oracle::fd_gradient([k](const State& x) { return spectral_invariants(x, 0.8, 4)(k - 2); }, s, 1e-5);
    EXPECT_LE((g - fd).cwiseAbs().maxCoeff(), 1e-6 * g.cwiseAbs().maxCoeff()) << k;
  }
}

TEST(SpectralInvariants, Involution) {
  const State s = sample(4, 14);
  const Mat J = poisson_tensor(s);
  for (auto [z, w] : {std::pair{0.4, 1.9}, std::pair{2.2, 0.7}}) {
    for (int k = 2; k <= 4; ++k) {
      for (int m = 2; m <= 4; ++m) {
        const Vec a = spectral_invariant_gradient(s, z, k);
        const Vec b = spectral_invariant_gradient(s, w, m);
        EXPECT_LE(std::abs(bracket_of_gradients<double>(J, a, b)), 1e-10 * bracket_magnitude(J, a, b));
      }
    }
  }
}

TEST(ExpansionInvariants, NodesAvoidMinusOne) {
  for (int l = 2; l <= 8; ++l) {
    const auto nodes = expansion_nodes(l);
    EXPECT_EQ(std::count(nodes.begin(), nodes.end(), -1.0), 0);
    EXPECT_EQ(static_cast<int>(nodes.size()), l + 1);
  }
}

TEST(ExpansionInvariants, InterpolationRecoversPolynomial) {
  const std::vector<double> nodes{-1.5, -0.5, 0.5, 1.5};
  const Vec c{{0.3, -2.0, 0.7, 1.1}};
  Vec values(4);
  for (int i = 0; i < 4; ++i) {
    const double x = nodes[static_cast<std::size_t>(i)];
    values(i) = c(0) + c(1) * x + c(2) * x * x + c(3) * x * x * x;
  }
  EXPECT_LE((interpolation_coefficients(nodes, values) - c).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ExpansionInvariants, MatchWordEnumeration) {
  for (int n : {3, 4, 5}) {
    const State s = sample(n, 15);
    const Mat A = eta_tilde(s) - s.T();
    const Mat B = -s.T();
    for (int l = 2; l <= n; ++l) {
      const Vec c = expansion_invariants(s, l);
      const Vec ref = oracle::word_expansion(A, B, l);
      const double scale = std::pow(A.norm() + B.norm(), l);
      EXPECT_LE((c - ref).cwiseAbs().maxCoeff(), 1e-12 * scale) << n << " " << l;
    }
  }
}

TEST(ExpansionInvariants, QuadraticTopCoefficientIsCasimir) {
  const State s = sample(4, 16);
  EXPECT_NEAR(expansion_invariants(s, 2)(2), trace_power(s.T(), 2), 1e-12 * s.T().squaredNorm());
}

TEST(ExpansionInvariants, FreeCaseOnlyConstantTerm) {
  const State s = zero_spin(4);
  for (int l = 2; l <= 4; ++l) {
    const Vec c = expansion_invariants(s, l);
    EXPECT_NEAR(c(0), s.v().array().pow(l).sum(), 1e-13);
    for (int k = 1; k <= l; ++k) EXPECT_NEAR(c(k), 0.0, 1e-13);
  }
}

TEST(ExpansionInvariants, OddCoefficientsVanish) {
  const State s = sample(5, 17);
  for (int l = 2; l <= 5; ++l) {
    const Vec c = expansion_invariants(s, l);
    for (int k = 1; k <= l; k += 2) EXPECT_LE(std::abs(c(k)), 1e-12 * c.cwiseAbs().maxCoeff()) << l << " " << k;
  }
}

TEST(ExpansionInvariants, GradientsMatchFiniteDifferences) {
  const State s = sample(4, 18);
  for (int l = 2; l <= 4; ++l) {
    const auto grads = expansion_invariant_gradients(s, l);
    for (int k = 0; k <= l; k += 2) {
      const Vec fd = oracle::fd_gradient([l, k](const State& x) { return expansion_invariants(x, l)(k); }, s, 1e-5);
      const Vec& g = grads[static_cast<std::size_t>(k)];
      EXPECT_LE((g - fd).cwiseAbs().maxCoeff(), 1e-6 * std::max(g.cwiseAbs().maxCoeff(), 1.0)) << l << " " << k;
    }
  }
}

TEST(MixedTraces, OddPureSpinTraceIsZero) {
  const State s = sample(5, 19);
  for (int l : {3, 5}) EXPECT_LE(std::abs(mixed_trace_invariant(s, l, 0)), 1e-14 * std::pow(s.T().norm(), l));
}

TEST(MixedTraces, HalfQuadraticEtaTraceIsHamiltonian) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const State s = sample(4, seed);
    EXPECT_NEAR(0.5 * mixed_trace_invariant(s, 2, 2), hamiltonian(s), 1e-12 * std::max(1.0, std::abs(hamiltonian(s))));
  }
}

TEST(MixedTraces, EvenFirstOrderTermIsSpinCasimir) {
  const State s = sample(4, 20);
  for (int l : {2, 4}) {
    EXPECT_NEAR(mixed_trace_invariant(s, l, 1), trace_power(s.T(), l), 1e-12 * std::pow(s.T().norm(), l) * 10);
  }
}

TEST(ChartRelation, FreeCase) {
  EXPECT_LE(chart_relation_residual(zero_spin(3), 0.3).residual, 1e-15);
}

TEST(ChartRelation, RandomStateAndNegativeControl) {
  const State s = sample(3, 21);
  const auto r = chart_relation_residual(s, 0.3);
  EXPECT_LE(r.residual, 1e-13 * r.scale);
  const auto control = chart_relation_residual(s, 0.3, false);
  EXPECT_GE(control.relative(), 1e6 * 1e-12);
}

TEST(ChartRelation, Poles) {
  EXPECT_THROW(chart_relation_residual(sample(3, 1), 0.0), PoleError);
  EXPECT_THROW(chart_relation_residual(sample(3, 1), 1.0), PoleError);
}

TEST(Counting, Formulas) {
  const std::map<int, std::pair<int, int>> quoted{{2, {2, 1}}, {3, {5, 4}}, {4, {9, 7}}};
  for (const auto& [n, counts] : quoted) {
    EXPECT_EQ(integral_count(n), counts.first);
    EXPECT_EQ(so_integral_count(n), counts.second);
  }
  for (int n = 2; n <= 20; ++n) EXPECT_EQ(integral_count(n), integral_count_closed_form(n));
}

TEST(Counting, TwoParticleFlowRankIsHamiltonianOnly) {
  const IntegralRank r = independent_integral_rank(sample(2, 3));
  EXPECT_EQ(r.flow_rank, 1);
  EXPECT_EQ(r.expected_so, 1);
}

TEST(Counting, RanksAreStableAcrossStates) {
  // Measured values, compared against N_G' in the acceptance report.
  for (int n : {3, 4}) {
    const IntegralRank a = independent_integral_rank(sample(n, 1));
    const IntegralRank b = independent_integral_rank(sample(n, 2));
    EXPECT_EQ(a.jacobian_rank, b.jacobian_rank);
    EXPECT_EQ(a.flow_rank, b.flow_rank);
    EXPECT_LE(a.flow_rank, a.expected_so);
    EXPECT_EQ(a.family_size, [n] { int t = 0; for (int l = 2; l <= n; ++l) t += l + 1; return t; }());
  }
}
