#include <algorithm>
#include <numeric>

#include "gwlab/community.hpp"
#include "gwlab/rng.hpp"

namespace gwlab {

Clustering label_propagation(const Graph& g, std::uint64_t seed, LabelPropagationStats* stats) {
  const std::size_t n = g.node_count();
  std::vector<NodeId> label(n);
  std::iota(label.begin(), label.end(), NodeId{0});
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});

  std::vector<std::uint32_t> count(n, 0);
  std::vector<NodeId> touched, modal;
  SeededRng rng(seed, {"label_propagation"});

  LabelPropagationStats local;
  while (local.rounds < kLabelPropagationMaxRounds) {
    ++local.rounds;
    rng.shuffle(order);
    bool changed = false;
    for (NodeId v : order) {
      if (g.degree(v) == 0) continue;
      touched.clear();
      std::uint32_t best = 0;
      for (NodeId w : g.neighbors(v)) {
        const NodeId l = label[w];
        if (count[l]++ == 0) touched.push_back(l);
        best = std::max(best, count[l]);
      }
      modal.clear();
      for (NodeId l : touched)
        if (count[l] == best) modal.push_back(l);
      const bool keep = count[label[v]] == best;
      for (NodeId l : touched) count[l] = 0;
      if (keep) continue;
      label[v] = modal[modal.size() == 1 ? 0 : rng.uniform_below(modal.size())];
      changed = true;
    }
    if (!changed) {
      local.converged = true;
      break;
    }
  }
  if (stats) *stats = local;
  std::vector<std::uint64_t> labels(label.begin(), label.end());
  return Clustering::from_labels(labels);
}

}  // namespace gwlab
