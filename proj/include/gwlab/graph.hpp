#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gwlab {

using NodeId = std::uint32_t;

/// Unordered node pair, stored with first < second.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  static Edge ordered(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }
  std::uint64_t key() const { return (static_cast<std::uint64_t>(u) << 32) | v; }
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph over dense node ids [0, node_count).
///
/// Each adjacency list is kept sorted and duplicate-free; every mutation keeps
/// both endpoint lists in sync so the graph stays symmetric and loop-free.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t node_count) : adj_(node_count) {}

  /// Builds a graph from arbitrary pairs: self-loops are dropped, duplicates
  /// and reversed duplicates collapse into one edge.
  static Graph from_edges(std::size_t node_count, std::span<const Edge> edges);
  static Graph from_edges(std::size_t node_count, std::initializer_list<Edge> edges) {
    return from_edges(node_count, std::span<const Edge>(edges.begin(), edges.size()));
  }

  std::size_t node_count() const noexcept { return adj_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const NodeId> neighbors(NodeId v) const { return adj_[v]; }
  std::size_t degree(NodeId v) const { return adj_[v].size(); }
  bool has_edge(NodeId u, NodeId v) const;

  /// Returns false if the edge was already present. Throws on u == v.
  bool add_edge(NodeId u, NodeId v);
  /// Returns false if the edge was absent.
  bool remove_edge(NodeId u, NodeId v);
  /// XOR-toggles (u, v). Returns true when the edge is present afterwards.
  bool flip_edge(NodeId u, NodeId v);

  NodeId add_node();

  /// All edges with u < v, sorted lexicographically.
  std::vector<Edge> edges() const;
  std::vector<std::size_t> degrees() const;

  /// Throws gwlab::Error when symmetry, loop-freedom, ordering or the edge
  /// count are violated. O(m log d).
  void validate() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  void check_range(NodeId u, NodeId v) const;
  void debug_check_pair(NodeId u, NodeId v) const;

  std::vector<std::vector<NodeId>> adj_;
  std::size_t edge_count_ = 0;
};

/// Free-function form of Graph::flip_edge.
inline bool flip_edge(Graph& g, NodeId u, NodeId v) { return g.flip_edge(u, v); }

/// Bijection between raw labels found in input files and dense node ids.
struct NodeLabelMap {
  std::unordered_map<std::string, NodeId> external_to_internal;
  std::vector<std::string> internal_to_external;

  /// Returns the id for label, assigning the next dense id on first sight.
  NodeId intern(const std::string& label);
  const std::string& label(NodeId v) const { return internal_to_external.at(v); }
  std::size_t size() const { return internal_to_external.size(); }

  /// Identity labels "0".."n-1".
  static NodeLabelMap identity(std::size_t n);
};

struct LoadedGraph {
  Graph graph;
  NodeLabelMap labels;
};

struct EdgeListOptions {
  /// SNAP's as-caida files carry a third relationship column. When set, data
  /// lines may have two or more tokens and anything past the second is ignored.
  bool allow_extra_columns = false;
};

/// Reads a whitespace-separated edge list ('#' comment lines, blank lines
/// ignored). Throws ParseError with the offending line number.
LoadedGraph load_edge_list(std::istream& in, const EdgeListOptions& options = {});
LoadedGraph load_edge_list_file(const std::string& path, const EdgeListOptions& options = {});

/// Writes one "u v" line per edge (u < v by internal id) using labels when
/// given, else internal ids. Isolated nodes are not representable.
void write_edge_list(std::ostream& out, const Graph& g, const NodeLabelMap* labels = nullptr);
void write_edge_list_file(const std::string& path, const Graph& g,
                          const NodeLabelMap* labels = nullptr);

/// Node Structure Descriptor: ascending degrees of a node's neighbours.
struct NsdLabel {
  std::vector<std::uint32_t> degrees;

  std::string to_string() const;  // "2-4-6", "" for an isolated node
  friend bool operator==(const NsdLabel&, const NsdLabel&) = default;
  friend auto operator<=>(const NsdLabel&, const NsdLabel&) = default;
};

NsdLabel nsd(const Graph& g, NodeId v);

struct AnonymizedGraph {
  Graph graph;
  /// permutation[old_id] = new_id. Only for tests and harness bookkeeping;
  /// never stored alongside distributed copies.
  std::vector<NodeId> permutation;
};

/// Relabels nodes with a seeded uniform permutation.
AnonymizedGraph anonymize(const Graph& g, std::uint64_t seed);

/// Image of g under an explicit permutation (new_id = permutation[old_id]).
Graph permute(const Graph& g, std::span<const NodeId> permutation);

/// Size of the symmetric difference of the two edge sets. Both graphs must
/// share the node-id space.
std::size_t edge_symmetric_difference(const Graph& a, const Graph& b);

}  // namespace gwlab
