// Serial against OpenMP for the enumeration kernels. The second argument of
// each benchmark is 1 for the parallel path.

#include <benchmark/benchmark.h>

#include "gspin/lattice.hpp"
#include "gspin/stratum.hpp"
#include "gspin/vertexgraph.hpp"

using namespace gspin;

static void BM_region(benchmark::State& state) {
  auto s = make_setup(static_cast<int>(state.range(0)), 5, DetSelector::minus);
  bool par = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_region(s, par, false).integral);
}
BENCHMARK(BM_region)->Args({3, 0})->Args({3, 1})->Unit(benchmark::kMillisecond);

static void BM_lagrangians(benchmark::State& state) {
  auto L = find_maximal_vertex(make_setup(3, 6, DetSelector::minus));
  auto W = omega_from_vertex(L, static_cast<int>(state.range(0)));
  bool par = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_lagrangians(W, 50'000'000, par).size());
}
BENCHMARK(BM_lagrangians)->Args({2, 0})->Args({2, 1})->Unit(benchmark::kMillisecond);

static void BM_maximalize(benchmark::State& state) {
  int p = static_cast<int>(state.range(0));
  auto V = std::make_shared<QpQuadSpace>(flip_hasse(standard_space(p, 6, DetSelector::plus)));
  // p^2 times a lattice: many index-p steps, each an oracle call
  auto L = ZpLattice::standard(V);
  while (!is_integral(L)) L = L.scaled(1);
  L = L.scaled(2);
  OracleOptions opts;
  opts.parallel = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(maximalize(L, opts).key());
}
BENCHMARK(BM_maximalize)->Args({5, 0})->Args({5, 1})->Unit(benchmark::kMillisecond);

static void BM_vertex_graph(benchmark::State& state) {
  auto s = make_setup(3, 6, DetSelector::minus);
  s.parallel = state.range(1) != 0;
  auto L = find_maximal_vertex(s);
  for (auto _ : state) benchmark::DoNotOptimize(bfs_graph(s, L, static_cast<int>(state.range(0))).nodes.size());
}
BENCHMARK(BM_vertex_graph)->Args({1, 0})->Args({1, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
