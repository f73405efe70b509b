// Transform and Poisson-solve throughput across grid sizes.

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "fluidbound/fields.hpp"

namespace {

using namespace fluidbound;

std::vector<double> test_samples(Grid2D grid) {
  std::vector<double> samples(grid.physical_size());
  for (int row = 0; row < grid.ny; ++row) {
    const double y = 2.0 * kPi * row / grid.ny;
    for (int col = 0; col < grid.nx; ++col) {
      const double x = 2.0 * kPi * col / grid.nx;
      samples[static_cast<std::size_t>(row) * grid.nx + col] =
          std::sin(3.0 * x) * std::cos(2.0 * y) + 0.25 * std::sin(7.0 * y);
    }
  }
  return samples;
}

void BM_TransformRoundTrip(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid2D grid{n, n};
  const auto samples = test_samples(grid);
  for (auto _ : state) {
    auto field = SpectralField2D::from_samples(samples, grid);
    benchmark::DoNotOptimize(field.to_samples());
  }
  state.SetItemsProcessed(state.iterations() * grid.physical_size());
}
BENCHMARK(BM_TransformRoundTrip)->Arg(128)->Arg(256)->Arg(512);

void BM_PoissonSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid2D grid{n, n};
  const auto rhs = SpectralField2D::from_samples(test_samples(grid), grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(poisson_solve(rhs, 0.0));
  }
}
BENCHMARK(BM_PoissonSolve)->Arg(128)->Arg(256)->Arg(512);

void BM_LpNorm(benchmark::State& state) {
  const Grid2D grid{256, 256};
  const auto field = SpectralField2D::from_samples(test_samples(grid), grid);
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lp_norm(field, p));
  }
}
BENCHMARK(BM_LpNorm)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
