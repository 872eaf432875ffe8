#include "support.hpp"

#include <bit>
#include <cmath>
#include <numeric>

#include "gwlab/rng.hpp"

namespace gwlab::testing {

Graph er_graph_nm(std::size_t n, std::size_t m, std::uint64_t seed) {
  SeededRng rng(seed, {"test", "er"});
  std::set<std::uint64_t> seen;
  std::vector<Edge> edges;
  while (edges.size() < m) {
    const auto u = static_cast<NodeId>(rng.uniform_below(n));
    const auto v = static_cast<NodeId>(rng.uniform_below(n));
    if (u == v) continue;
    const Edge e = Edge::ordered(u, v);
    if (seen.insert(e.key()).second) edges.push_back(e);
  }
  return Graph::from_edges(n, edges);
}

Graph planted_partition(std::size_t blocks, std::size_t size, double p_in, double p_out,
                        std::uint64_t seed) {
  SeededRng rng(seed, {"test", "planted"});
  const std::size_t n = blocks * size;
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (rng.bernoulli(u / size == v / size ? p_in : p_out)) edges.push_back({u, v});
  return Graph::from_edges(n, edges);
}

Graph complete_graph(std::size_t n) { return disjoint_cliques(1, n); }

Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) edges.push_back({v - 1, v});
  return Graph::from_edges(n, edges);
}

Graph star_graph(std::size_t leaves) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v <= leaves; ++v) edges.push_back({0, v});
  return Graph::from_edges(leaves + 1, edges);
}

Graph disjoint_cliques(std::size_t count, std::size_t size) {
  std::vector<Edge> edges;
  for (std::size_t c = 0; c < count; ++c)
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = i + 1; j < size; ++j)
        edges.push_back({static_cast<NodeId>(c * size + i), static_cast<NodeId>(c * size + j)});
  return Graph::from_edges(count * size, edges);
}

EdgeSet edge_set(const Graph& g) {
  EdgeSet out;
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v : g.neighbors(u))
      if (u < v) out.emplace(u, v);
  return out;
}

std::size_t symdiff_size(const EdgeSet& a, const EdgeSet& b) {
  std::size_t common = 0;
  for (const auto& e : a) common += b.count(e);
  return a.size() + b.size() - 2 * common;
}

std::vector<std::size_t> oracle_degrees(std::size_t n, const EdgeSet& edges) {
  std::vector<std::size_t> deg(n, 0);
  for (auto [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

TripleCounts oracle_triples(std::size_t n, const EdgeSet& edges) {
  auto adj = [&](NodeId a, NodeId b) { return edges.count({std::min(a, b), std::max(a, b)}) > 0; };
  TripleCounts out;
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b)
      for (NodeId c = b + 1; c < n; ++c) {
        const int ab = adj(a, b), bc = adj(b, c), ac = adj(a, c);
        const int links = ab + bc + ac;
        if (links == 3) {
          ++out.triangles;
          out.triples += 3;  // one connected triple centred at each corner
        } else if (links == 2) {
          ++out.triples;
        }
      }
  return out;
}

double oracle_clustering(std::size_t n, const EdgeSet& edges) {
  const auto t = oracle_triples(n, edges);
  return t.triples == 0 ? 0.0 : 3.0 * static_cast<double>(t.triangles) / static_cast<double>(t.triples);
}

std::map<std::pair<std::size_t, std::size_t>, double> oracle_dk2(std::size_t n,
                                                                 const EdgeSet& edges) {
  const auto deg = oracle_degrees(n, edges);
  std::map<std::pair<std::size_t, std::size_t>, double> out;
  for (auto [u, v] : edges) out[{std::min(deg[u], deg[v]), std::max(deg[u], deg[v])}] += 1.0;
  for (auto& [k, mass] : out) mass /= static_cast<double>(edges.size());
  return out;
}

double oracle_dk2_deviation(std::size_t n, const EdgeSet& a, const EdgeSet& b) {
  auto va = oracle_dk2(n, a);
  auto vb = oracle_dk2(n, b);
  double diff = 0, base = 0;
  std::set<std::pair<std::size_t, std::size_t>> keys;
  for (auto& [k, _] : va) keys.insert(k);
  for (auto& [k, _] : vb) keys.insert(k);
  for (const auto& k : keys) {
    const double x = va.count(k) ? va[k] : 0.0;
    const double y = vb.count(k) ? vb[k] : 0.0;
    diff += (x - y) * (x - y);
    base += x * x;
  }
  return std::sqrt(diff) / std::sqrt(base);
}

double oracle_modularity(std::size_t n, const EdgeSet& edges,
                         const std::vector<std::uint32_t>& assignment) {
  const auto deg = oracle_degrees(n, edges);
  const double two_m = 2.0 * static_cast<double>(edges.size());
  double q = 0;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) {
      if (assignment[i] != assignment[j]) continue;
      const double a = (i != j && edges.count({std::min(i, j), std::max(i, j)})) ? 1.0 : 0.0;
      q += a - static_cast<double>(deg[i]) * static_cast<double>(deg[j]) / two_m;
    }
  return q / two_m;
}

std::vector<std::uint32_t> oracle_components(std::size_t n, const EdgeSet& edges) {
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [u, v] : edges) parent[find(u)] = find(v);
  std::vector<std::uint32_t> out(n);
  for (std::uint32_t v = 0; v < n; ++v) out[v] = find(v);
  return out;
}

Graph graph_from_rows(std::size_t n, const AdjRows& rows) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (rows[i] >> j & 1u) edges.push_back({i, j});
  return Graph::from_edges(n, edges);
}

double bitmask_clustering(std::size_t n, const AdjRows& rows) {
  std::uint64_t closed = 0, triples = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        const int links = (rows[a] >> b & 1) + (rows[b] >> c & 1) + (rows[a] >> c & 1);
        if (links == 3) {
          closed += 3;
          triples += 3;
        } else if (links == 2) {
          ++triples;
        }
      }
  return triples == 0 ? 0.0 : static_cast<double>(closed) / static_cast<double>(triples);
}

std::uint64_t for_each_small_graph(const std::function<void(std::size_t, const AdjRows&)>& fn) {
  std::uint64_t visited = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    const std::size_t pairs = n * (n - 1) / 2;
    for (std::uint32_t mask = 0; mask < (1u << pairs); ++mask) {
      AdjRows rows{};
      std::size_t bit = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j, ++bit)
          if (mask >> bit & 1u) {
            rows[i] |= 1u << j;
            rows[j] |= 1u << i;
          }
      fn(n, rows);
      ++visited;
    }
  }
  for (std::size_t n = 7; n <= 8; ++n) {
    AdjRows rows{};
    // Row i picks the neighbours of i among i+1..n-1; deg(i) is final after it.
    auto fill = [&](auto&& self, std::size_t i) -> void {
      if (i == n) {
        fn(n, rows);
        ++visited;
        return;
      }
      const std::size_t free = n - 1 - i;
      for (std::uint32_t pick = 0; pick < (1u << free); ++pick) {
        const AdjRows saved = rows;
        for (std::size_t b = 0; b < free; ++b)
          if (pick >> b & 1u) {
            rows[i] |= 1u << (i + 1 + b);
            rows[i + 1 + b] |= 1u << i;
          }
        if (i == 0 || std::popcount(rows[i]) <= std::popcount(rows[i - 1])) self(self, i + 1);
        rows = saved;
      }
    };
    fill(fill, 0);
  }
  return visited;
}

}  // namespace gwlab::testing
