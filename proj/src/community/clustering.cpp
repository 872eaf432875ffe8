#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "gwlab/community.hpp"
#include "gwlab/error.hpp"

namespace gwlab {

Clustering Clustering::from_labels(std::span<const std::uint64_t> labels) {
  Clustering c;
  c.assignment.resize(labels.size());
  std::unordered_map<std::uint64_t, ClusterId> dense;
  for (std::size_t v = 0; v < labels.size(); ++v) {
    auto [it, inserted] = dense.try_emplace(labels[v], static_cast<ClusterId>(dense.size()));
    if (inserted) c.members.emplace_back();
    c.assignment[v] = it->second;
    c.members[it->second].push_back(static_cast<NodeId>(v));
  }
  c.num_clusters = c.members.size();
  return c;
}

void Clustering::validate(std::size_t node_count) const {
  if (assignment.size() != node_count)
    throw Error("clustering covers " + std::to_string(assignment.size()) + " nodes, graph has " +
                std::to_string(node_count));
  if (members.size() != num_clusters) throw Error("member lists out of sync with cluster count");
  std::size_t listed = 0;
  for (ClusterId id = 0; id < num_clusters; ++id) {
    if (members[id].empty()) throw Error("empty cluster " + std::to_string(id));
    for (NodeId v : members[id]) {
      if (v >= node_count || assignment[v] != id) throw Error("member list disagrees with assignment");
    }
    listed += members[id].size();
  }
  if (listed != node_count) throw Error("member lists do not cover every node exactly once");
}

double modularity(const Graph& g, const Clustering& c) {
  if (g.edge_count() == 0) throw InvalidArgument("modularity is undefined for an edgeless graph");
  if (c.assignment.size() != g.node_count())
    throw InvalidArgument("clustering size does not match graph");
  std::vector<double> internal(c.num_clusters, 0.0), degree(c.num_clusters, 0.0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    degree[c.assignment[u]] += static_cast<double>(g.degree(u));
    for (NodeId v : g.neighbors(u))
      if (u < v && c.assignment[u] == c.assignment[v]) internal[c.assignment[u]] += 1.0;
  }
  const double m = static_cast<double>(g.edge_count());
  double q = 0.0;
  for (std::size_t id = 0; id < c.num_clusters; ++id) {
    const double share = degree[id] / (2.0 * m);
    q += internal[id] / m - share * share;
  }
  return q;
}

Clustering split_disconnected(const Graph& g, const Clustering& c) {
  const std::size_t n = g.node_count();
  std::vector<std::uint64_t> labels(n, 0);
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack;
  std::uint64_t next = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (seen[s]) continue;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      labels[u] = next;
      for (NodeId v : g.neighbors(u)) {
        if (!seen[v] && c.assignment[v] == c.assignment[s]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return Clustering::from_labels(labels);
}

bool clusters_connected(const Graph& g, const Clustering& c) {
  return split_disconnected(g, c).num_clusters == c.num_clusters;
}

std::string_view to_string(Detector d) {
  switch (d) {
    case Detector::GreedyModularity: return "greedy_modularity";
    case Detector::LabelPropagation: return "label_propagation";
    case Detector::Leiden: return "leiden";
  }
  return "unknown";
}

std::optional<Detector> parse_detector(std::string_view name) {
  if (name == "greedy" || name == "greedy_modularity") return Detector::GreedyModularity;
  if (name == "lpa" || name == "label_propagation") return Detector::LabelPropagation;
  if (name == "leiden") return Detector::Leiden;
  return std::nullopt;
}

Clustering run_detector(Detector d, const Graph& g, std::uint64_t seed) {
  switch (d) {
    case Detector::GreedyModularity: return greedy_modularity(g);
    case Detector::LabelPropagation: return label_propagation(g, seed);
    case Detector::Leiden: return leiden(g, seed);
  }
  throw InvalidArgument("unknown detector");
}

Clustering load_clustering(std::istream& in, const NodeLabelMap& map) {
  const std::size_t n = map.size();
  std::vector<std::uint64_t> labels(n, 0);
  std::vector<char> listed(n, 0);
  std::unordered_map<std::string, std::uint64_t> cluster_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string node, cluster, extra;
    fields >> node >> cluster;
    if (cluster.empty() || (fields >> extra))
      throw ParseError("expected \"node_label cluster_label\", got \"" + line + "\"", line_no);
    auto it = map.external_to_internal.find(node);
    if (it == map.external_to_internal.end())
      throw ParseError("unknown node label \"" + node + "\"", line_no);
    if (listed[it->second]) throw ParseError("node \"" + node + "\" listed twice", line_no);
    listed[it->second] = 1;
    auto [cid, _] = cluster_ids.try_emplace(cluster, cluster_ids.size());
    labels[it->second] = cid->second;
  }
  for (NodeId v = 0; v < n; ++v)
    if (!listed[v]) throw ParseError("clustering does not assign node \"" + map.label(v) + "\"");
  return Clustering::from_labels(labels);
}

Clustering load_clustering_file(const std::string& path, const NodeLabelMap& map) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open clustering file " + path);
  return load_clustering(in, map);
}

void write_clustering(std::ostream& out, const Clustering& c, const NodeLabelMap& map) {
  if (map.size() != c.node_count()) throw InvalidArgument("label map does not match clustering");
  out << "# node_label\tcluster_id (" << c.num_clusters << " clusters)\n";
  for (NodeId v = 0; v < c.node_count(); ++v) out << map.label(v) << '\t' << c.assignment[v] << '\n';
}

void write_clustering_file(const std::string& path, const Clustering& c, const NodeLabelMap& map) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_clustering(out, c, map);
}

}  // namespace gwlab
