#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gwlab/graph.hpp"

namespace gwlab {

using ClusterId = std::uint32_t;

/// Total partition of a graph's nodes into non-empty clusters [0, num_clusters).
struct Clustering {
  std::vector<ClusterId> assignment;
  std::size_t num_clusters = 0;
  std::vector<std::vector<NodeId>> members;

  /// Densifies arbitrary per-node labels; cluster ids follow first
  /// appearance in node order.
  static Clustering from_labels(std::span<const std::uint64_t> labels);

  ClusterId cluster_of(NodeId v) const { return assignment[v]; }
  std::size_t node_count() const { return assignment.size(); }

  /// Throws gwlab::Error unless the partition is total, dense and consistent.
  void validate(std::size_t node_count) const;

  friend bool operator==(const Clustering&, const Clustering&) = default;
};

/// Newman modularity at resolution 1. Throws InvalidArgument for an edgeless
/// graph or a clustering of the wrong size.
double modularity(const Graph& g, const Clustering& c);

struct LabelPropagationStats {
  std::size_t rounds = 0;
  bool converged = false;
};

inline constexpr std::size_t kLabelPropagationMaxRounds = 100;

/// Asynchronous label propagation. Each round visits nodes in a fresh seeded
/// order; a node keeps its label while that label is among the most frequent
/// in its neighbourhood, otherwise it adopts a uniformly drawn modal label.
/// Stops after a round without changes or after 100 rounds.
Clustering label_propagation(const Graph& g, std::uint64_t seed,
                             LabelPropagationStats* stats = nullptr);

/// Clauset–Newman–Moore agglomeration: repeatedly merges the connected pair
/// with the largest modularity gain until no gain is positive. Ties go to the
/// smallest (cluster id, cluster id) pair. If q_trace is given it receives the
/// modularity after every merge (preceded by the singleton value).
Clustering greedy_modularity(const Graph& g, std::vector<double>* q_trace = nullptr);

/// Leiden (modularity, resolution 1): fast local moves, randomized
/// refinement, aggregation on the refined partition; whole passes repeat until
/// the partition stops changing. Every returned community is connected.
Clustering leiden(const Graph& g, std::uint64_t seed);

/// Splits every cluster into its connected components.
Clustering split_disconnected(const Graph& g, const Clustering& c);

/// True when every cluster induces a connected subgraph.
bool clusters_connected(const Graph& g, const Clustering& c);

enum class Detector { GreedyModularity, LabelPropagation, Leiden };

std::string_view to_string(Detector d);
/// Accepts "greedy", "greedy_modularity", "label_propagation", "lpa", "leiden".
std::optional<Detector> parse_detector(std::string_view name);

Clustering run_detector(Detector d, const Graph& g, std::uint64_t seed);

/// Reads "node_label cluster_label" lines ('#' comments). Every node of the
/// map must be listed exactly once.
Clustering load_clustering(std::istream& in, const NodeLabelMap& map);
Clustering load_clustering_file(const std::string& path, const NodeLabelMap& map);

/// Writes "node_label<TAB>cluster_id" in node-id order.
void write_clustering(std::ostream& out, const Clustering& c, const NodeLabelMap& map);
void write_clustering_file(const std::string& path, const Clustering& c, const NodeLabelMap& map);

}  // namespace gwlab
