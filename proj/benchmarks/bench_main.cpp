#include <benchmark/benchmark.h>

#include <random>

#include "kms/oracle.hpp"
#include "kms/sampling.hpp"
#include "kms/solenoid_limit.hpp"
#include "kms/subinvariance.hpp"
#include "kms/toeplitz_algebra.hpp"

namespace {

using namespace kms;

void BM_Multiply(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int terms = static_cast<int>(state.range(0));
  const Scenario s = example_scenario_2x2();
  const auto a = random_element(rng, s.dims, terms);
  const auto b = random_element(rng, s.dims, terms);
  for (auto _ : state) benchmark::DoNotOptimize(multiply(a, b, s.level(1).theta));
  state.SetComplexityN(terms * terms);
}
BENCHMARK(BM_Multiply)->RangeMultiplier(2)->Range(2, 32)->Complexity();

void BM_PsiEval(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const Scenario s = example_scenario_2x2(1.0, static_cast<int>(state.range(0)));
  const auto thread = build_thread(UniformThread{}, s);
  const auto a = random_element(rng, s.dims, 8, s.depth());
  for (auto _ : state) benchmark::DoNotOptimize(psi_eval(thread, a));
}
BENCHMARK(BM_PsiEval)->DenseRange(1, 4);

void BM_PositivityTest(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const int dim = static_cast<int>(state.range(0));
  const BlockParams P = random_block_params(rng, Dimensions{dim, 1});
  const auto nu = nu_from_mu(random_probability_measure(rng, dim, 4), P);
  for (auto _ : state) benchmark::DoNotOptimize(positivity_test(nu));
}
BENCHMARK(BM_PositivityTest)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_LaplaceQuadrature(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const int k = static_cast<int>(state.range(0));
  const BlockParams P = random_block_params(rng, Dimensions{1, k});
  const auto mu = random_probability_measure(rng, 1, 3);
  const IntVector n{2};
  for (auto _ : state) benchmark::DoNotOptimize(oracle::laplace_quadrature(mu, P, n));
}
BENCHMARK(BM_LaplaceQuadrature)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
