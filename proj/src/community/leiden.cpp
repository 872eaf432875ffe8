#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "gwlab/community.hpp"
#include "gwlab/error.hpp"
#include "gwlab/rng.hpp"

namespace gwlab {

namespace {

// Randomness of the refinement merge step. Gains are measured in edge-weight
// units, so 0.01 makes the choice nearly greedy with randomized near-ties.
constexpr double kTheta = 0.01;
constexpr double kEps = 1e-12;
constexpr int kMaxPasses = 10;

struct WeightedGraph {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // no self-loops
  std::vector<double> strength;                                   // includes internal weight
  double two_m = 0.0;

  std::size_t size() const { return adj.size(); }

  static WeightedGraph from(const Graph& g) {
    WeightedGraph w;
    w.adj.resize(g.node_count());
    w.strength.resize(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
      for (NodeId x : g.neighbors(v)) w.adj[v].emplace_back(x, 1.0);
      w.strength[v] = static_cast<double>(g.degree(v));
    }
    w.two_m = 2.0 * static_cast<double>(g.edge_count());
    return w;
  }
};

// Scratch accumulator of link weight from one node into each community.
struct LinkWeights {
  std::vector<double> weight;
  std::vector<std::uint32_t> touched;

  explicit LinkWeights(std::size_t n) : weight(n, 0.0) {}
  void add(std::uint32_t c, double w) {
    if (weight[c] == 0.0) touched.push_back(c);
    weight[c] += w;
  }
  void clear() {
    for (auto c : touched) weight[c] = 0.0;
    touched.clear();
  }
};

// Queue-based local moving. Returns true if any node changed community.
bool move_nodes_fast(const WeightedGraph& g, std::vector<std::uint32_t>& comm, SeededRng& rng) {
  const std::size_t n = g.size();
  std::vector<double> total(n, 0.0);
  std::vector<std::uint32_t> size(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    total[comm[v]] += g.strength[v];
    ++size[comm[v]];
  }
  std::vector<std::uint32_t> empty;
  for (std::uint32_t c = n; c-- > 0;)
    if (size[c] == 0) empty.push_back(c);

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  rng.shuffle(order);
  std::deque<std::uint32_t> queue(order.begin(), order.end());
  std::vector<char> queued(n, 1);
  LinkWeights links(n);
  bool changed = false;

  while (!queue.empty()) {
    const std::uint32_t v = queue.front();
    queue.pop_front();
    queued[v] = 0;
    const std::uint32_t from = comm[v];
    const double kv = g.strength[v];

    for (const auto& [x, w] : g.adj[v]) links.add(comm[x], w);
    total[from] -= kv;
    --size[from];

    // Relative gains; the cost of leaving `from` is common to every target.
    std::uint32_t best = from;
    double best_gain = links.weight[from] - kv * total[from] / g.two_m;
    for (std::uint32_t c : links.touched) {
      if (c == from) continue;
      const double gain = links.weight[c] - kv * total[c] / g.two_m;
      if (gain > best_gain + kEps) {
        best_gain = gain;
        best = c;
      }
    }
    if (size[from] > 0 && 0.0 > best_gain + kEps && !empty.empty()) best = empty.back();
    links.clear();

    if (best == from) {
      total[from] += kv;
      ++size[from];
      continue;
    }
    if (!empty.empty() && empty.back() == best) empty.pop_back();
    if (size[from] == 0) empty.push_back(from);
    comm[v] = best;
    total[best] += kv;
    ++size[best];
    changed = true;
    for (const auto& [x, w] : g.adj[v]) {
      if (!queued[x] && comm[x] != best) {
        queued[x] = 1;
        queue.push_back(x);
      }
    }
  }
  return changed;
}

// Refinement inside each community of `comm`: starting from singletons, each
// well-connected singleton joins a well-connected refined subset of its own
// community, drawn with probability ∝ exp(gain / θ) among non-negative gains.
std::vector<std::uint32_t> refine(const WeightedGraph& g, const std::vector<std::uint32_t>& comm,
                                  SeededRng& rng) {
  const std::size_t n = g.size();
  std::vector<std::uint32_t> refined(n);
  std::iota(refined.begin(), refined.end(), 0u);
  std::vector<double> total(g.strength);      // per refined community
  std::vector<std::uint32_t> size(n, 1);      // per refined community
  std::vector<double> external(n, 0.0);       // E(T, C \ T) per refined community
  std::vector<double> comm_total(n, 0.0);

  std::vector<std::vector<std::uint32_t>> members(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    members[comm[v]].push_back(v);
    comm_total[comm[v]] += g.strength[v];
  }
  for (std::uint32_t v = 0; v < n; ++v)
    for (const auto& [x, w] : g.adj[v])
      if (comm[x] == comm[v]) external[v] += w;

  LinkWeights links(n);
  std::vector<std::uint32_t> options;
  std::vector<double> gains;
  for (auto& nodes : members) {
    if (nodes.size() < 2) continue;
    const double kc = comm_total[comm[nodes.front()]];
    rng.shuffle(nodes);
    for (std::uint32_t v : nodes) {
      if (size[refined[v]] != 1) continue;
      const double kv = g.strength[v];
      if (external[v] < kv * (kc - kv) / g.two_m - kEps) continue;

      for (const auto& [x, w] : g.adj[v])
        if (comm[x] == comm[v]) links.add(refined[x], w);

      options.clear();
      gains.clear();
      options.push_back(refined[v]);
      gains.push_back(0.0);
      double top = 0.0;
      for (std::uint32_t t : links.touched) {
        if (t == refined[v]) continue;
        if (external[t] < total[t] * (kc - total[t]) / g.two_m - kEps) continue;
        const double gain = links.weight[t] - kv * total[t] / g.two_m;
        if (gain < 0.0) continue;
        options.push_back(t);
        gains.push_back(gain);
        top = std::max(top, gain);
      }
      std::uint32_t target = refined[v];
      if (options.size() > 1) {
        double sum = 0.0;
        for (double& gn : gains) {
          gn = std::exp((gn - top) / kTheta);
          sum += gn;
        }
        double r = rng.uniform01() * sum;
        std::size_t pick = 0;
        while (pick + 1 < options.size() && r >= gains[pick]) {
          r -= gains[pick];
          ++pick;
        }
        target = options[pick];
      }
      if (target != refined[v]) {
        const double to_target = links.weight[target];
        const std::uint32_t from = refined[v];
        external[target] = external[target] + external[from] - 2.0 * to_target;
        total[target] += kv;
        ++size[target];
        total[from] = 0.0;
        size[from] = 0;
        refined[v] = target;
      }
      links.clear();
    }
  }
  return refined;
}

// Densify ids in first-seen order; returns the number of groups.
std::size_t densify(std::vector<std::uint32_t>& labels) {
  std::vector<std::uint32_t> remap(labels.size(), UINT32_MAX);
  std::uint32_t next = 0;
  for (auto& l : labels) {
    if (remap[l] == UINT32_MAX) remap[l] = next++;
    l = remap[l];
  }
  return next;
}

WeightedGraph aggregate(const WeightedGraph& g, const std::vector<std::uint32_t>& group,
                        std::size_t groups) {
  WeightedGraph out;
  out.two_m = g.two_m;
  out.adj.resize(groups);
  out.strength.assign(groups, 0.0);
  LinkWeights links(groups);
  std::vector<std::vector<std::uint32_t>> members(groups);
  for (std::uint32_t v = 0; v < g.size(); ++v) {
    members[group[v]].push_back(v);
    out.strength[group[v]] += g.strength[v];
  }
  for (std::uint32_t c = 0; c < groups; ++c) {
    for (std::uint32_t v : members[c])
      for (const auto& [x, w] : g.adj[v])
        if (group[x] != c) links.add(group[x], w);
    std::sort(links.touched.begin(), links.touched.end());
    for (std::uint32_t d : links.touched) out.adj[c].emplace_back(d, links.weight[d]);
    links.clear();
  }
  return out;
}

// One Leiden pass starting from `initial` on the original graph.
std::vector<std::uint32_t> leiden_pass(const WeightedGraph& base,
                                       const std::vector<std::uint32_t>& initial,
                                       SeededRng& rng) {
  WeightedGraph g = base;
  std::vector<std::uint32_t> comm = initial;
  std::vector<std::uint32_t> node_of(base.size());  // original node -> current aggregate node
  std::iota(node_of.begin(), node_of.end(), 0u);

  while (true) {
    move_nodes_fast(g, comm, rng);
    const std::size_t communities = densify(comm);
    if (communities == g.size()) break;

    std::vector<std::uint32_t> refined = refine(g, comm, rng);
    const std::size_t refined_count = densify(refined);
    std::vector<std::uint32_t> group;
    std::vector<std::uint32_t> next_comm;
    if (refined_count < g.size()) {
      group = refined;
      next_comm.assign(refined_count, 0);
      for (std::uint32_t v = 0; v < g.size(); ++v) next_comm[refined[v]] = comm[v];
    } else {
      group = comm;
      next_comm.resize(communities);
      std::iota(next_comm.begin(), next_comm.end(), 0u);
    }
    g = aggregate(g, group, next_comm.size());
    for (auto& a : node_of) a = group[a];
    comm = std::move(next_comm);
  }

  std::vector<std::uint32_t> flat(base.size());
  for (std::uint32_t v = 0; v < base.size(); ++v) flat[v] = comm[node_of[v]];
  densify(flat);
  return flat;
}

}  // namespace

Clustering leiden(const Graph& g, std::uint64_t seed) {
  if (g.edge_count() == 0) throw InvalidArgument("leiden needs at least one edge");
  const WeightedGraph base = WeightedGraph::from(g);
  SeededRng rng(seed, {"leiden"});

  std::vector<std::uint32_t> partition(g.node_count());
  std::iota(partition.begin(), partition.end(), 0u);
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    auto next = leiden_pass(base, partition, rng);
    const bool same = next == partition;
    partition = std::move(next);
    if (same) break;
  }
  std::vector<std::uint64_t> labels(partition.begin(), partition.end());
  // Leiden communities are connected by construction; the split only guards
  // against floating-point edge cases in the refinement thresholds.
  return split_disconnected(g, Clustering::from_labels(labels));
}

}  // namespace gwlab
