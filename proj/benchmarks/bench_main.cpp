#include <benchmark/benchmark.h>

#include "riesz/energy.hpp"
#include "riesz/estimator.hpp"
#include "riesz/generators.hpp"
#include "riesz/measures.hpp"
#include "riesz/parallel.hpp"
#include "riesz/sets.hpp"

namespace {

riesz::PointCloud uniform_cloud(std::size_t n, std::size_t d) {
  return riesz::sample(riesz::UniformCube{d}, n, 7).cloud;
}

void BM_DiscreteEnergy(benchmark::State& state) {
  const auto cloud = uniform_cloud(static_cast<std::size_t>(state.range(0)), 2);
  riesz::set_max_threads(static_cast<unsigned>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(riesz::discrete_energy(cloud, 0.75));
  riesz::set_max_threads(0);
  state.SetItemsProcessed(state.iterations() * state.range(0) * (state.range(0) - 1) / 2);
}
BENCHMARK(BM_DiscreteEnergy)->ArgsProduct({{1000, 4000, 16000}, {1, 0}})->Unit(benchmark::kMillisecond);

void BM_EnergyProfile(benchmark::State& state) {
  const auto n_max = static_cast<std::size_t>(state.range(0));
  const auto cloud = uniform_cloud(n_max, 1);
  const auto s = riesz::exponent_grid(0.1, 1.9, 0.1);
  const auto n = riesz::geometric_grid(n_max / 16, n_max, 5);
  for (auto _ : state) benchmark::DoNotOptimize(riesz::energy_profile(cloud, s, n));
}
BENCHMARK(BM_EnergyProfile)->Arg(2048)->Arg(8192)->Unit(benchmark::kMillisecond);

void BM_DistanceSetLattice(benchmark::State& state) {
  const auto cloud = riesz::lattice(2, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(riesz::distance_set(cloud));
}
BENCHMARK(BM_DistanceSetLattice)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_DistanceSetQuantized(benchmark::State& state) {
  const auto cloud = uniform_cloud(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(riesz::distance_set(cloud));
}
BENCHMARK(BM_DistanceSetQuantized)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
