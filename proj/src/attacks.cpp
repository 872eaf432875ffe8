#include "gwlab/attacks.hpp"

#include <set>
#include <unordered_map>
#include <unordered_set>

#include "gwlab/error.hpp"
#include "gwlab/rng.hpp"

namespace gwlab {

std::string_view to_string(AttackKind k) {
  switch (k) {
    case AttackKind::RandomBaseline: return "random";
    case AttackKind::IntraAddInterRemove: return "intra_add_inter_remove";
    case AttackKind::IntraRemoveInterAdd: return "intra_remove_inter_add";
  }
  return "unknown";
}

std::optional<AttackKind> parse_attack_kind(std::string_view name) {
  if (name == "random" || name == "random_baseline") return AttackKind::RandomBaseline;
  if (name == "intra_add_inter_remove" || name == "strategy1" || name == "ia_ir")
    return AttackKind::IntraAddInterRemove;
  if (name == "intra_remove_inter_add" || name == "strategy2" || name == "ir_ia")
    return AttackKind::IntraRemoveInterAdd;
  return std::nullopt;
}

namespace {

constexpr int kPairRejectionAttempts = 64;

// Edge set supporting uniform sampling and O(1) deletion.
class EdgePool {
 public:
  void insert(Edge e) {
    index_.emplace(e.key(), edges_.size());
    edges_.push_back(e);
  }
  bool empty() const { return edges_.empty(); }
  std::size_t size() const { return edges_.size(); }

  Edge take(SeededRng& rng) {
    const auto pos = static_cast<std::size_t>(rng.uniform_below(edges_.size()));
    const Edge e = edges_[pos];
    index_.erase(e.key());
    if (pos + 1 != edges_.size()) {
      edges_[pos] = edges_.back();
      index_[edges_[pos].key()] = pos;
    }
    edges_.pop_back();
    return e;
  }

 private:
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

void require_cover(const Graph& g, const Clustering& c) {
  if (c.node_count() != g.node_count())
    throw InvalidArgument("clustering covers " + std::to_string(c.node_count()) +
                          " nodes but the graph has " + std::to_string(g.node_count()));
}

std::uint64_t pairs_within(std::uint64_t s) { return s * (s > 0 ? s - 1 : 0) / 2; }

// Draws a uniform non-adjacent pair (u in a, v in b), a == b meaning a pair
// inside one member list. Rejection first, exhaustive listing as a fallback.
std::optional<Edge> non_adjacent_pair(const Graph& g, const std::vector<NodeId>& a,
                                      const std::vector<NodeId>& b, bool same, SeededRng& rng) {
  auto draw = [&]() -> Edge {
    if (same) {
      const auto i = rng.uniform_below(a.size());
      auto j = rng.uniform_below(a.size() - 1);
      if (j >= i) ++j;
      return Edge::ordered(a[i], a[j]);
    }
    return Edge::ordered(a[rng.uniform_below(a.size())], b[rng.uniform_below(b.size())]);
  };
  if (same && a.size() < 2) return std::nullopt;
  for (int attempt = 0; attempt < kPairRejectionAttempts; ++attempt) {
    const Edge e = draw();
    if (!g.has_edge(e.u, e.v)) return e;
  }
  std::vector<Edge> open;
  if (same) {
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = i + 1; j < a.size(); ++j)
        if (!g.has_edge(a[i], a[j])) open.push_back(Edge::ordered(a[i], a[j]));
  } else {
    for (NodeId u : a)
      for (NodeId v : b)
        if (!g.has_edge(u, v)) open.push_back(Edge::ordered(u, v));
  }
  if (open.empty()) return std::nullopt;
  return open[rng.uniform_below(open.size())];
}

struct Recorder {
  AttackOutcome& out;
  void add(Edge e, FlipCategory cat) {
    out.graph.add_edge(e.u, e.v);
    out.performed.push_back({e.u, e.v, FlipAction::Add, cat});
    ++out.added_count;
  }
  void remove(Edge e, FlipCategory cat) {
    out.graph.remove_edge(e.u, e.v);
    out.performed.push_back({e.u, e.v, FlipAction::Remove, cat});
    ++out.removed_count;
  }
};

}  // namespace

AttackOutcome random_flip_attack(const Graph& g_prime, const AttackSpec& spec) {
  if (spec.kind != AttackKind::RandomBaseline)
    throw InvalidArgument("random_flip_attack expects kind = random");
  const std::uint64_t n = g_prime.node_count();
  const std::uint64_t total_pairs = pairs_within(n);
  if (spec.flips > total_pairs)
    throw InvalidArgument("cannot flip " + std::to_string(spec.flips) + " distinct pairs in a " +
                          std::to_string(n) + "-node graph");

  AttackOutcome out;
  out.graph = g_prime;
  Recorder rec{out};
  SeededRng rng(spec.seed, {"attack", "random"});
  auto apply = [&](Edge e) {
    if (out.graph.has_edge(e.u, e.v))
      rec.remove(e, FlipCategory::Uncategorized);
    else
      rec.add(e, FlipCategory::Uncategorized);
  };

  if (spec.flips == 0) return out;
  if (2 * spec.flips > total_pairs) {
    // Dense request: partial shuffle over the full pair list.
    std::vector<Edge> all;
    all.reserve(total_pairs);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v) all.push_back({u, v});
    for (std::size_t i = 0; i < spec.flips; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.uniform_below(all.size() - i));
      std::swap(all[i], all[j]);
      apply(all[i]);
    }
    return out;
  }
  std::unordered_set<std::uint64_t> used;
  while (out.performed.size() < spec.flips) {
    const auto u = static_cast<NodeId>(rng.uniform_below(n));
    auto v = static_cast<NodeId>(rng.uniform_below(n - 1));
    if (v >= u) ++v;
    const Edge e = Edge::ordered(u, v);
    if (!used.insert(e.key()).second) continue;
    apply(e);
  }
  return out;
}

AttackOutcome intra_add_inter_remove(const Graph& g_prime, const Clustering& clustering,
                                     const AttackSpec& spec) {
  if (spec.kind != AttackKind::IntraAddInterRemove)
    throw InvalidArgument("intra_add_inter_remove expects kind = intra_add_inter_remove");
  require_cover(g_prime, clustering);

  AttackOutcome out;
  out.graph = g_prime;
  Recorder rec{out};
  SeededRng rng(spec.seed, {"attack", "intra_add_inter_remove"});

  EdgePool inter;
  std::uint64_t intra_edges = 0;
  for (const Edge& e : g_prime.edges()) {
    if (clustering.cluster_of(e.u) != clustering.cluster_of(e.v))
      inter.insert(e);
    else
      ++intra_edges;
  }
  std::uint64_t intra_capacity = 0;
  std::vector<ClusterId> open;  // clusters that may still hold a non-adjacent pair
  for (ClusterId c = 0; c < clustering.num_clusters; ++c) {
    intra_capacity += pairs_within(clustering.members[c].size());
    if (clustering.members[c].size() >= 2) open.push_back(c);
  }

  auto try_add = [&]() {
    if (intra_edges >= intra_capacity) return false;
    while (!open.empty()) {
      const auto pos = static_cast<std::size_t>(rng.uniform_below(open.size()));
      const auto& members = clustering.members[open[pos]];
      if (auto e = non_adjacent_pair(out.graph, members, members, true, rng)) {
        rec.add(*e, FlipCategory::Intra);
        ++intra_edges;
        return true;
      }
      // Complete clusters stay complete: this strategy never removes intra edges.
      open[pos] = open.back();
      open.pop_back();
    }
    return false;
  };
  auto try_remove = [&]() {
    if (inter.empty()) return false;
    rec.remove(inter.take(rng), FlipCategory::Inter);
    return true;
  };

  while (out.performed.size() < spec.flips) {
    const bool add_first = rng.bernoulli(spec.add_probability);
    const bool done = add_first ? (try_add() || try_remove()) : (try_remove() || try_add());
    if (!done) {
      out.exhausted_early = true;
      break;
    }
  }
  return out;
}

AttackOutcome intra_remove_inter_add(const Graph& g_prime, const Clustering& clustering,
                                     const AttackSpec& spec) {
  if (spec.kind != AttackKind::IntraRemoveInterAdd)
    throw InvalidArgument("intra_remove_inter_add expects kind = intra_remove_inter_add");
  require_cover(g_prime, clustering);

  AttackOutcome out;
  out.graph = g_prime;
  Recorder rec{out};
  SeededRng rng(spec.seed, {"attack", "intra_remove_inter_add"});

  EdgePool intra;
  std::uint64_t inter_edges = 0;
  for (const Edge& e : g_prime.edges()) {
    if (clustering.cluster_of(e.u) == clustering.cluster_of(e.v))
      intra.insert(e);
    else
      ++inter_edges;
  }
  std::uint64_t within = 0;
  for (const auto& m : clustering.members) within += pairs_within(m.size());
  const std::uint64_t inter_capacity = pairs_within(g_prime.node_count()) - within;
  const std::uint64_t k = clustering.num_clusters;
  std::set<std::pair<ClusterId, ClusterId>> saturated;

  auto try_add = [&]() {
    if (k < 2 || inter_edges >= inter_capacity) return false;
    while (true) {
      const auto c = static_cast<ClusterId>(rng.uniform_below(k));
      auto d = static_cast<ClusterId>(rng.uniform_below(k - 1));
      if (d >= c) ++d;
      const auto key = std::minmax(c, d);
      if (saturated.contains(key)) continue;
      if (auto e = non_adjacent_pair(out.graph, clustering.members[c], clustering.members[d],
                                     false, rng)) {
        rec.add(*e, FlipCategory::Inter);
        ++inter_edges;
        return true;
      }
      // Fully linked cluster pairs stay so: inter edges are never removed here.
      saturated.insert(key);
    }
  };
  auto try_remove = [&]() {
    if (intra.empty()) return false;
    rec.remove(intra.take(rng), FlipCategory::Intra);
    return true;
  };

  while (out.performed.size() < spec.flips) {
    const bool add_first = rng.bernoulli(spec.add_probability);
    const bool done = add_first ? (try_add() || try_remove()) : (try_remove() || try_add());
    if (!done) {
      out.exhausted_early = true;
      break;
    }
  }
  return out;
}

AttackOutcome run_attack(const Graph& g_prime, const Clustering* clustering,
                         const AttackSpec& spec) {
  switch (spec.kind) {
    case AttackKind::RandomBaseline: return random_flip_attack(g_prime, spec);
    case AttackKind::IntraAddInterRemove:
      if (!clustering) throw InvalidArgument("cluster-aware attack needs a clustering");
      return intra_add_inter_remove(g_prime, *clustering, spec);
    case AttackKind::IntraRemoveInterAdd:
      if (!clustering) throw InvalidArgument("cluster-aware attack needs a clustering");
      return intra_remove_inter_add(g_prime, *clustering, spec);
  }
  throw InvalidArgument("unknown attack kind");
}

}  // namespace gwlab
