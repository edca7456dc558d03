// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "wgpt/generators.hpp"
#include "wgpt/hadamard.hpp"
#include "wgpt/kernels.hpp"

using namespace wgpt;

namespace {

struct Fixture {
  WeightedGraph graph;
  std::vector<double> f, h, out, inv_row_sum;
};

const Fixture& fixture(int n) {
  static std::map<int, Fixture> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Fixture fx;
  // About two chords per vertex keeps the graph sparse at every size.
  RandomGraphOptions opts;
  opts.extra_edge_probability = 4.0 / n;
  fx.graph = random_connected_graph(n, 1, opts);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  fx.f.resize(fx.graph.size());
  fx.h.resize(fx.graph.size());
  for (auto& v : fx.f) v = u(rng);
  for (auto& v : fx.h) v = u(rng);
  fx.out.resize(fx.graph.size());
  for (Index x = 0; x < fx.graph.size(); ++x) fx.inv_row_sum.push_back(1.0 / fx.graph.row_sum(x));
  return cache.emplace(n, std::move(fx)).first->second;
}

template <bool Parallel>
void BM_laplacian(benchmark::State& state) {
  auto& fx = const_cast<Fixture&>(fixture(int(state.range(0))));
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::parallel::laplacian(fx.graph.adjacency(), fx.graph.measures(), fx.f, fx.out);
    else
      kernels::serial::laplacian(fx.graph.adjacency(), fx.graph.measures(), fx.f, fx.out);
    benchmark::DoNotOptimize(fx.out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_pairing(benchmark::State& state) {
  const Fixture& fx = fixture(int(state.range(0)));
  for (auto _ : state) {
    const double v = Parallel ? kernels::parallel::pairing(fx.graph.adjacency(), fx.f, fx.h)
                              : kernels::serial::pairing(fx.graph.adjacency(), fx.f, fx.h);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_transition_step(benchmark::State& state) {
  auto& fx = const_cast<Fixture&>(fixture(int(state.range(0))));
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::parallel::transition_step(fx.graph.adjacency(), fx.inv_row_sum, fx.f, fx.out);
    else
      kernels::serial::transition_step(fx.graph.adjacency(), fx.inv_row_sum, fx.f, fx.out);
    benchmark::DoNotOptimize(fx.out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

// Jacobi sweeps of the harmonic-map relaxation into the Poincare disk.
template <bool Parallel>
void BM_disk_relaxation(benchmark::State& state) {
  const int n = int(state.range(0));
  const WeightedGraph g = path_graph(n);
  std::vector<Index> region;
  for (Index x = 1; x + 1 < Index(n); ++x) region.push_back(x);
  VertexMap<std::complex<double>> ends(g.size());
  ends.set(0, {0.5, 0.0});
  ends.set(Index(n - 1), {0.0, 0.5});
  HarmonicMapOptions opts;
  opts.max_iters = 20;
  opts.parallel = Parallel;
  const PoincareDisk disk;
  for (auto _ : state) benchmark::DoNotOptimize(solve_harmonic_map(g, disk, region, ends, opts).last_displacement);
  state.SetItemsProcessed(state.iterations() * 20 * (n - 2));
}

}  // namespace

BENCHMARK(BM_laplacian<false>)->Name("laplacian/serial")->RangeMultiplier(10)->Range(1000, 1000000);
BENCHMARK(BM_laplacian<true>)->Name("laplacian/parallel")->RangeMultiplier(10)->Range(1000, 1000000);
BENCHMARK(BM_pairing<false>)->Name("pairing/serial")->RangeMultiplier(10)->Range(1000, 1000000);
BENCHMARK(BM_pairing<true>)->Name("pairing/parallel")->RangeMultiplier(10)->Range(1000, 1000000);
BENCHMARK(BM_transition_step<false>)->Name("transition_step/serial")->RangeMultiplier(10)->Range(1000, 1000000);
BENCHMARK(BM_transition_step<true>)->Name("transition_step/parallel")->RangeMultiplier(10)->Range(1000, 1000000);
BENCHMARK(BM_disk_relaxation<false>)->Name("disk_relaxation/serial")->Arg(200)->Arg(2000);
BENCHMARK(BM_disk_relaxation<true>)->Name("disk_relaxation/parallel")->Arg(200)->Arg(2000);

BENCHMARK_MAIN();
