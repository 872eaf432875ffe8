#include "gwlab/graph.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "gwlab/error.hpp"
#include "gwlab/rng.hpp"

namespace gwlab {

Graph Graph::from_edges(std::size_t node_count, std::span<const Edge> edges) {
  Graph g(node_count);
  for (const Edge& e : edges) {
    if (e.u >= node_count || e.v >= node_count)
      throw InvalidArgument("edge endpoint out of range");
    if (e.u == e.v) continue;
    g.adj_[e.u].push_back(e.v);
    g.adj_[e.v].push_back(e.u);
  }
  std::size_t ends = 0;
  for (auto& list : g.adj_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    ends += list.size();
  }
  g.edge_count_ = ends / 2;
  return g;
}

void Graph::check_range(NodeId u, NodeId v) const {
  if (u >= adj_.size() || v >= adj_.size()) throw InvalidArgument("node id out of range");
  if (u == v) throw InvalidArgument("self-loop (" + std::to_string(u) + ", " +
                                    std::to_string(u) + ") is not allowed");
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u >= adj_.size() || v >= adj_.size()) return false;
  const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
  const NodeId target = adj_[u].size() <= adj_[v].size() ? v : u;
  return std::binary_search(a.begin(), a.end(), target);
}

void Graph::debug_check_pair([[maybe_unused]] NodeId u, [[maybe_unused]] NodeId v) const {
#ifndef NDEBUG
  const bool uv = std::binary_search(adj_[u].begin(), adj_[u].end(), v);
  const bool vu = std::binary_search(adj_[v].begin(), adj_[v].end(), u);
  assert(uv == vu);
  assert(std::is_sorted(adj_[u].begin(), adj_[u].end()));
  assert(std::is_sorted(adj_[v].begin(), adj_[v].end()));
#endif
}

bool Graph::add_edge(NodeId u, NodeId v) {
  check_range(u, v);
  auto& au = adj_[u];
  auto it = std::lower_bound(au.begin(), au.end(), v);
  if (it != au.end() && *it == v) return false;
  au.insert(it, v);
  auto& av = adj_[v];
  av.insert(std::lower_bound(av.begin(), av.end(), u), u);
  ++edge_count_;
  debug_check_pair(u, v);
  return true;
}

bool Graph::remove_edge(NodeId u, NodeId v) {
  check_range(u, v);
  auto& au = adj_[u];
  auto it = std::lower_bound(au.begin(), au.end(), v);
  if (it == au.end() || *it != v) return false;
  au.erase(it);
  auto& av = adj_[v];
  av.erase(std::lower_bound(av.begin(), av.end(), u));
  --edge_count_;
  debug_check_pair(u, v);
  return true;
}

bool Graph::flip_edge(NodeId u, NodeId v) {
  if (remove_edge(u, v)) return false;
  add_edge(u, v);
  return true;
}

NodeId Graph::add_node() {
  adj_.emplace_back();
  return static_cast<NodeId>(adj_.size() - 1);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < adj_.size(); ++u)
    for (NodeId v : adj_[u])
      if (u < v) out.push_back({u, v});
  return out;
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> out(adj_.size());
  for (std::size_t v = 0; v < adj_.size(); ++v) out[v] = adj_[v].size();
  return out;
}

void Graph::validate() const {
  std::size_t ends = 0;
  for (NodeId u = 0; u < adj_.size(); ++u) {
    const auto& list = adj_[u];
    ends += list.size();
    for (std::size_t i = 0; i < list.size(); ++i) {
      const NodeId v = list[i];
      if (v >= adj_.size()) throw Error("neighbor id out of range");
      if (v == u) throw Error("self-loop at node " + std::to_string(u));
      if (i > 0 && list[i - 1] >= v) throw Error("adjacency not strictly sorted");
      if (!std::binary_search(adj_[v].begin(), adj_[v].end(), u))
        throw Error("asymmetric adjacency");
    }
  }
  if (ends != 2 * edge_count_) throw Error("edge count out of sync with adjacency");
}

NodeId NodeLabelMap::intern(const std::string& label) {
  auto [it, inserted] =
      external_to_internal.try_emplace(label, static_cast<NodeId>(internal_to_external.size()));
  if (inserted) internal_to_external.push_back(label);
  return it->second;
}

NodeLabelMap NodeLabelMap::identity(std::size_t n) {
  NodeLabelMap map;
  map.internal_to_external.reserve(n);
  for (std::size_t i = 0; i < n; ++i) map.intern(std::to_string(i));
  return map;
}

LoadedGraph load_edge_list(std::istream& in, const EdgeListOptions& options) {
  LoadedGraph out;
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string a, b, extra;
    fields >> a >> b;
    const bool has_extra = static_cast<bool>(fields >> extra);
    if (b.empty() || (has_extra && !options.allow_extra_columns))
      throw ParseError("expected exactly two node labels, got \"" + line + "\"", line_no);
    const NodeId u = out.labels.intern(a);
    const NodeId v = out.labels.intern(b);
    edges.push_back({u, v});
  }
  if (in.bad()) throw ParseError("read error", line_no);
  out.graph = Graph::from_edges(out.labels.size(), edges);
  return out;
}

LoadedGraph load_edge_list_file(const std::string& path, const EdgeListOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge list " + path);
  return load_edge_list(in, options);
}

void write_edge_list(std::ostream& out, const Graph& g, const NodeLabelMap* labels) {
  if (labels && labels->size() != g.node_count())
    throw InvalidArgument("label map does not match graph size");
  out << "# undirected edge list: " << g.node_count() << " nodes, " << g.edge_count()
      << " edges\n";
  for (const Edge& e : g.edges()) {
    if (labels)
      out << labels->label(e.u) << '\t' << labels->label(e.v) << '\n';
    else
      out << e.u << '\t' << e.v << '\n';
  }
}

void write_edge_list_file(const std::string& path, const Graph& g, const NodeLabelMap* labels) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_edge_list(out, g, labels);
}

std::string NsdLabel::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(degrees[i]);
  }
  return s;
}

NsdLabel nsd(const Graph& g, NodeId v) {
  NsdLabel label;
  const auto nbrs = g.neighbors(v);
  label.degrees.reserve(nbrs.size());
  for (NodeId w : nbrs) label.degrees.push_back(static_cast<std::uint32_t>(g.degree(w)));
  std::sort(label.degrees.begin(), label.degrees.end());
  return label;
}

Graph permute(const Graph& g, std::span<const NodeId> permutation) {
  if (permutation.size() != g.node_count()) throw InvalidArgument("permutation size mismatch");
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const Edge& e : g.edges()) edges.push_back({permutation[e.u], permutation[e.v]});
  return Graph::from_edges(g.node_count(), edges);
}

AnonymizedGraph anonymize(const Graph& g, std::uint64_t seed) {
  AnonymizedGraph out;
  out.permutation.resize(g.node_count());
  std::iota(out.permutation.begin(), out.permutation.end(), NodeId{0});
  SeededRng rng(seed, {"anonymize"});
  rng.shuffle(out.permutation);
  out.graph = permute(g, out.permutation);
  return out;
}

std::size_t edge_symmetric_difference(const Graph& a, const Graph& b) {
  if (a.node_count() != b.node_count()) throw InvalidArgument("graphs differ in node count");
  std::size_t diff = 0;
  for (NodeId u = 0; u < a.node_count(); ++u) {
    auto x = a.neighbors(u);
    auto y = b.neighbors(u);
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
      if (j == y.size() || (i < x.size() && x[i] < y[j])) {
        diff += x[i] > u;
        ++i;
      } else if (i == x.size() || y[j] < x[i]) {
        diff += y[j] > u;
        ++j;
      } else {
        ++i;
        ++j;
      }
    }
  }
  return diff;
}

}  // namespace gwlab
