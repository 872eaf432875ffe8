#pragma once

// Generators and brute-force oracles shared by the unit and acceptance tests.
// Oracles work on plain edge sets and never call the library routine they
// check.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "gwlab/graph.hpp"

namespace gwlab::testing {

/// G(n, m): m distinct uniform pairs.
Graph er_graph_nm(std::size_t n, std::size_t m, std::uint64_t seed);

/// Planted partition: `blocks` groups of `size` nodes (block b holds ids
/// [b*size, (b+1)*size)), intra-pair probability p_in, inter p_out.
Graph planted_partition(std::size_t blocks, std::size_t size, double p_in, double p_out,
                        std::uint64_t seed);

Graph complete_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph star_graph(std::size_t leaves);
/// Disjoint copies of K_size.
Graph disjoint_cliques(std::size_t count, std::size_t size);

using EdgeSet = std::set<std::pair<NodeId, NodeId>>;
EdgeSet edge_set(const Graph& g);
std::size_t symdiff_size(const EdgeSet& a, const EdgeSet& b);

/// Degree counts recomputed from the edge set.
std::vector<std::size_t> oracle_degrees(std::size_t n, const EdgeSet& edges);

/// Triangles and connected triples by enumerating every node triple.
struct TripleCounts {
  std::uint64_t triangles = 0;
  std::uint64_t triples = 0;
};
TripleCounts oracle_triples(std::size_t n, const EdgeSet& edges);
double oracle_clustering(std::size_t n, const EdgeSet& edges);

/// Unnormalised unordered degree-pair histogram.
std::map<std::pair<std::size_t, std::size_t>, double> oracle_dk2(std::size_t n,
                                                                 const EdgeSet& edges);
/// Relative L2 deviation over the union support.
double oracle_dk2_deviation(std::size_t n, const EdgeSet& a, const EdgeSet& b);

/// Newman modularity from the definition sum_ij [A_ij - k_i k_j / 2m] δ(c_i, c_j) / 2m.
double oracle_modularity(std::size_t n, const EdgeSet& edges,
                         const std::vector<std::uint32_t>& assignment);

/// Connected components by union-find.
std::vector<std::uint32_t> oracle_components(std::size_t n, const EdgeSet& edges);

/// Adjacency rows as bitmasks, for graphs of at most 8 nodes.
using AdjRows = std::array<std::uint32_t, 8>;

Graph graph_from_rows(std::size_t n, const AdjRows& rows);
double bitmask_clustering(std::size_t n, const AdjRows& rows);

/// Visits every labelled graph on 1..6 nodes, and for 7 and 8 nodes every
/// labelled graph whose degrees are non-increasing in node order (at least
/// one copy of each isomorphism class). Returns the number visited.
std::uint64_t for_each_small_graph(const std::function<void(std::size_t, const AdjRows&)>& fn);

}  // namespace gwlab::testing
