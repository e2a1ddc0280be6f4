#include <benchmark/benchmark.h>

#include "lord/graph.hpp"
#include "lord/projection.hpp"
#include "lord/rng.hpp"
#include "lord/solver.hpp"

namespace {

lord::Dataset random_points(int n, int d, std::uint64_t seed) {
  lord::CounterRng rng(seed, 5);
  lord::Dataset data;
  data.features.resize(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) data.features(i, j) = rng.normal();
  return data;
}

void BM_BuildGraph(benchmark::State& state) {
  const lord::Dataset data = random_points(int(state.range(0)), 16, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(lord::build_knn_graph(data));
}
BENCHMARK(BM_BuildGraph)->Arg(200)->Arg(500)->Arg(1000);

void BM_DykstraProject(benchmark::State& state) {
  const int n = int(state.range(0)), k = 4;
  const lord::ClassPrior mu = lord::uniform_prior(k);
  lord::CounterRng rng(2, 3);
  Eigen::MatrixXd U(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) U(i, j) = rng.normal() * 0.1 + 1.0 / n;
  for (auto _ : state)
    benchmark::DoNotOptimize(lord::dykstra_project(U, mu));
}
BENCHMARK(BM_DykstraProject)->Arg(200)->Arg(1000);

void BM_PgdSolve(benchmark::State& state) {
  const lord::Dataset data = random_points(int(state.range(0)), 8, 4);
  const lord::SparseSimilarity sim =
      lord::normalize_total(lord::build_knn_graph(data));
  const lord::SpectralBounds bounds = lord::spectral_bounds(sim);
  const lord::ClassPrior mu = lord::uniform_prior(4);
  lord::SolverConfig config;
  config.restarts = 1;
  config.t_max = 50;
  config.seed = 11;
  for (auto _ : state)
    benchmark::DoNotOptimize(lord::pgd_solve(sim, bounds, mu, config));
}
BENCHMARK(BM_PgdSolve)->Arg(200)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
