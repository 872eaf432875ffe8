// Serial reference kernels against their OpenMP versions.
//
//   ./build/bench/gwlab_bench --benchmark_filter=Triangles
//   OMP_NUM_THREADS=8 ./build/bench/gwlab_bench
//
// Hosts are preferential-attachment graphs, so degrees are skewed like the
// SNAP social and collaboration graphs.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <map>

#include "gwlab/graph.hpp"
#include "gwlab/rng.hpp"
#include "gwlab/structure.hpp"
#include "gwlab/watermark.hpp"

using namespace gwlab;

namespace {

Graph preferential_attachment(std::size_t n, std::size_t per_node) {
  SeededRng rng(42, {"bench", "pa"});
  std::vector<Edge> edges;
  std::vector<NodeId> ends;  // every edge endpoint, for degree-biased draws
  for (NodeId v = 1; v <= per_node && v < n; ++v) {
    edges.push_back({0, v});
    ends.insert(ends.end(), {0, v});
  }
  for (NodeId v = static_cast<NodeId>(per_node) + 1; v < n; ++v)
    for (std::size_t j = 0; j < per_node; ++j) {
      const NodeId u = ends[rng.uniform_below(ends.size())];
      edges.push_back(Edge::ordered(u, v));
      ends.insert(ends.end(), {u, v});
    }
  return Graph::from_edges(n, edges);
}

const Graph& host(std::size_t n) {
  static std::map<std::size_t, Graph> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, preferential_attachment(n, 10)).first;
  return it->second;
}

void counters(benchmark::State& state, const Graph& g) {
  state.counters["nodes"] = static_cast<double>(g.node_count());
  state.counters["edges"] = static_cast<double>(g.edge_count());
  state.counters["threads"] = omp_get_max_threads();
}

void BM_TrianglesSerial(benchmark::State& state) {
  const Graph& g = host(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(count_triangles_serial(g));
  counters(state, g);
}

void BM_TrianglesParallel(benchmark::State& state) {
  const Graph& g = host(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(count_triangles_parallel(g));
  counters(state, g);
}

void BM_DegreePairsSerial(benchmark::State& state) {
  const Graph& g = host(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(degree_pair_counts_serial(g));
  counters(state, g);
}

void BM_DegreePairsParallel(benchmark::State& state) {
  const Graph& g = host(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(degree_pair_counts_parallel(g));
  counters(state, g);
}

// Labels of a real embedding, so candidate sets have realistic sizes.
const RecipientRecord& record(std::size_t n) {
  static std::map<std::size_t, RecipientRecord> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, embed(host(n), {}, 7, "bench").record).first;
  return it->second;
}

void BM_NsdCandidatesSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph& g = host(n);
  const auto& labels = record(n).slot_labels;
  for (auto _ : state) benchmark::DoNotOptimize(nsd_candidates_serial(g, labels));
  counters(state, g);
}

void BM_NsdCandidatesParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph& g = host(n);
  const auto& labels = record(n).slot_labels;
  for (auto _ : state) benchmark::DoNotOptimize(nsd_candidates_parallel(g, labels));
  counters(state, g);
}

}  // namespace

BENCHMARK(BM_TrianglesSerial)->Arg(4000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrianglesParallel)->Arg(4000)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DegreePairsSerial)->Arg(4000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DegreePairsParallel)->Arg(4000)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NsdCandidatesSerial)->Arg(4000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NsdCandidatesParallel)->Arg(4000)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
