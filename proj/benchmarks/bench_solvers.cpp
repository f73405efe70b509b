// Time-step costs of the nonlinear Euler, linearized Euler, and KdV solvers.

#include <cmath>
#include <utility>
#include <vector>

#include <benchmark/benchmark.h>

#include "fluidbound/euler.hpp"
#include "fluidbound/kdv.hpp"
#include "fluidbound/stability.hpp"

namespace {

using namespace fluidbound;

constexpr double kNormalizedU0 = 0.22507907903927651;  // 1/sqrt(2 pi^2)

EulerState perturbed_equilibrium(int n) {
  const EquilibriumParams equil(2, kNormalizedU0);
  const EigenMode mode = build_eigenmode(equil, 1, 64);
  const Grid2D grid{n, n};
  SpectralField2D omega(grid);
  omega.set_coeff(0, equil.m, Complex(-0.5 * equil.U0 * equil.m, 0.0));
  omega.set_coeff(0, -equil.m, Complex(-0.5 * equil.U0 * equil.m, 0.0));
  auto [vtilde, ptilde] = synthesize_perturbation(mode, grid, 0.0, 1e-3);
  omega += vorticity_of(vtilde);
  return EulerState{grid, std::move(omega), {0.0, 0.0}, 0.0};
}

void BM_NonlinearStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  EulerState euler = perturbed_equilibrium(n);
  for (auto _ : state) {
    euler = nonlinear_step(euler, 2e-3);
  }
  benchmark::DoNotOptimize(euler.omega.raw());
}
BENCHMARK(BM_NonlinearStep)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_LinearStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const EquilibriumParams equil(2, kNormalizedU0);
  const EigenMode mode = build_eigenmode(equil, 1, 64);
  const Grid2D grid{n, n};
  auto [vtilde, ptilde] = synthesize_perturbation(mode, grid, 0.0, 1e-3);
  LinearState linear{grid, std::move(vtilde), std::move(ptilde), 0.0};
  for (auto _ : state) {
    linear = linear_step(linear, equil, 2e-3);
  }
  benchmark::DoNotOptimize(linear.vtilde.x.raw());
}
BENCHMARK(BM_LinearStep)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_KdvStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid1D window(-50.0, 92.0, n);
  KdvState kdv{window, {}, 0.0};
  kdv.phi = soliton_samples(SolitonParams(1.0, 0.0), window, 0.0);
  const auto second = soliton_samples(SolitonParams(1.05, 0.0), window, 0.0);
  for (std::size_t i = 0; i < kdv.phi.size(); ++i) {
    kdv.phi[i] += second[i];
  }
  for (auto _ : state) {
    kdv = kdv_step(kdv, 1e-3);
  }
  benchmark::DoNotOptimize(kdv.phi);
}
BENCHMARK(BM_KdvStep)->Arg(1024)->Arg(4096);

void BM_PressureRecovery(benchmark::State& state) {
  EulerState euler = perturbed_equilibrium(256);
  for (auto _ : state) {
    benchmark::DoNotOptimize(recover_pressure(euler, 0.0));
  }
}
BENCHMARK(BM_PressureRecovery)->Unit(benchmark::kMillisecond);

}  // namespace
