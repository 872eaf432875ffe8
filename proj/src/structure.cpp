#include "gwlab/structure.hpp"

#include <omp.h>

#include <algorithm>
#include <unordered_map>
#include <vector>

namespace gwlab {

namespace {

// Orient every edge from lower to higher (degree, id) rank. Each triangle is
// then found exactly once, and out-lists stay short on skewed graphs.
std::vector<std::vector<NodeId>> forward_adjacency(const Graph& g) {
  const std::size_t n = g.node_count();
  auto before = [&](NodeId a, NodeId b) {
    const auto da = g.degree(a), db = g.degree(b);
    return da < db || (da == db && a < b);
  };
  std::vector<std::vector<NodeId>> fwd(n);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : g.neighbors(u))
      if (before(u, v)) fwd[u].push_back(v);
  }
  return fwd;
}

std::uint64_t sorted_intersection_size(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
  std::uint64_t count = 0;
  auto i = a.begin(), j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

DegreePair pair_for(const Graph& g, NodeId u, NodeId v) {
  auto a = static_cast<std::uint32_t>(g.degree(u));
  auto b = static_cast<std::uint32_t>(g.degree(v));
  return a <= b ? DegreePair{a, b} : DegreePair{b, a};
}

struct PairHash {
  std::size_t operator()(const DegreePair& p) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(p.first) << 32) | p.second);
  }
};

}  // namespace

std::uint64_t count_triangles_serial(const Graph& g) {
  const auto fwd = forward_adjacency(g);
  std::uint64_t total = 0;
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v : fwd[u]) total += sorted_intersection_size(fwd[u], fwd[v]);
  return total;
}

std::uint64_t count_triangles_parallel(const Graph& g) {
  const auto fwd = forward_adjacency(g);
  const auto n = static_cast<std::int64_t>(g.node_count());
  std::uint64_t total = 0;
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : total)
  for (std::int64_t u = 0; u < n; ++u)
    for (NodeId v : fwd[u]) total += sorted_intersection_size(fwd[u], fwd[v]);
  return total;
}

std::uint64_t count_connected_triples(const Graph& g) {
  std::uint64_t triples = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const std::uint64_t d = g.degree(v);
    if (d >= 2) triples += d * (d - 1) / 2;
  }
  return triples;
}

double global_clustering_coefficient(const Graph& g) {
  const auto triples = count_connected_triples(g);
  if (triples == 0) return 0.0;
  return 3.0 * static_cast<double>(count_triangles_parallel(g)) / static_cast<double>(triples);
}

std::map<DegreePair, std::uint64_t> degree_pair_counts_serial(const Graph& g) {
  std::map<DegreePair, std::uint64_t> counts;
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v : g.neighbors(u))
      if (u < v) ++counts[pair_for(g, u, v)];
  return counts;
}

std::map<DegreePair, std::uint64_t> degree_pair_counts_parallel(const Graph& g) {
  const auto n = static_cast<std::int64_t>(g.node_count());
  std::vector<std::unordered_map<DegreePair, std::uint64_t, PairHash>> partial(
      static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
  {
    auto& local = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
    for (std::int64_t u = 0; u < n; ++u)
      for (NodeId v : g.neighbors(static_cast<NodeId>(u)))
        if (static_cast<NodeId>(u) < v) ++local[pair_for(g, static_cast<NodeId>(u), v)];
  }
  std::map<DegreePair, std::uint64_t> counts;
  for (const auto& local : partial)
    for (const auto& [pair, c] : local) counts[pair] += c;
  return counts;
}

JointDegreeVector joint_degree_vector(const Graph& g) {
  JointDegreeVector out;
  if (g.edge_count() == 0) return out;
  const double m = static_cast<double>(g.edge_count());
  for (const auto& [pair, c] : degree_pair_counts_parallel(g))
    out.entries.emplace(pair, static_cast<double>(c) / m);
  return out;
}

}  // namespace gwlab
