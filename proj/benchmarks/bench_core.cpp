#include <benchmark/benchmark.h>

#include "gcs/brackets.hpp"
#include "gcs/dynamics.hpp"
#include "gcs/integrator.hpp"
#include "gcs/lax.hpp"
#include "gcs/rmatrix.hpp"
#include "gcs/verify.hpp"

namespace {

gcs::State state(benchmark::State& st) { return gcs::verification_state(static_cast<int>(st.range(0)), 3); }

void BM_Eom(benchmark::State& st) {
  const gcs::State s = state(st);
  for (auto _ : st) benchmark::DoNotOptimize(gcs::eom(s));
}
BENCHMARK(BM_Eom)->DenseRange(2, 8, 2);

void BM_EomViaBrackets(benchmark::State& st) {
  const gcs::State s = state(st);
  for (auto _ : st) benchmark::DoNotOptimize(gcs::eom_via_brackets(s));
}
BENCHMARK(BM_EomViaBrackets)->DenseRange(2, 8, 2);

void BM_PoissonTensor(benchmark::State& st) {
  const gcs::State s = state(st);
  for (auto _ : st) benchmark::DoNotOptimize(gcs::poisson_tensor(s));
}
BENCHMARK(BM_PoissonTensor)->DenseRange(2, 8, 2);

void BM_LaxResidual(benchmark::State& st) {
  const gcs::State s = state(st);
  for (auto _ : st) benchmark::DoNotOptimize(gcs::lax_residual(s, 0.7));
}
BENCHMARK(BM_LaxResidual)->DenseRange(2, 8, 2);

void BM_RmatrixResidual(benchmark::State& st) {
  const gcs::State s = state(st);
  for (auto _ : st) benchmark::DoNotOptimize(gcs::rmatrix_residual(s, 0.9, 0.4));
}
BENCHMARK(BM_RmatrixResidual)->DenseRange(2, 6, 1);

void BM_IntegrateAdaptive(benchmark::State& st) {
  const gcs::State s = state(st);
  gcs::IntegratorConfig cfg;
  cfg.t_end = 1.0;
  cfg.tol = 1e-12;
  cfg.dt = 0.0;
  cfg.sample_stride = 1000;
  for (auto _ : st) benchmark::DoNotOptimize(gcs::integrate(s, cfg));
}
BENCHMARK(BM_IntegrateAdaptive)->Arg(3)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
