// Continued-fraction evaluation, dispersion root solves, and eigenmode
// construction costs.

#include <benchmark/benchmark.h>

#include "fluidbound/bounds.hpp"
#include "fluidbound/stability.hpp"

namespace {

using namespace fluidbound;

void BM_ContinuedFraction(benchmark::State& state) {
  const EquilibriumParams equil(2, 1.0);
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(continued_fraction_rho(1, 0.5, equil, 1, depth));
  }
}
BENCHMARK(BM_ContinuedFraction)->Arg(32)->Arg(64)->Arg(128);

void BM_SolveGrowthRate(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const EquilibriumParams equil(m, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_growth_rate(equil, 1));
  }
}
BENCHMARK(BM_SolveGrowthRate)->Arg(2)->Arg(10);

void BM_BuildEigenmode(benchmark::State& state) {
  const EquilibriumParams equil(2, 1.0);
  const int J = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_eigenmode(equil, 1, J));
  }
}
BENCHMARK(BM_BuildEigenmode)->Arg(64)->Arg(128);

void BM_ScalingStudy(benchmark::State& state) {
  const GrowthBounds gb = growth_bounds(EquilibriumParams(2, 1.0), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(scaling_study({1e-6, 1e-7, 1e-8, 1e-9}, 1e-6,
                                           2.0, gb.gamma_l, gb.gamma_u));
  }
}
BENCHMARK(BM_ScalingStudy);

}  // namespace
