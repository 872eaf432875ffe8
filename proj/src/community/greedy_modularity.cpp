#include <algorithm>
#include <set>
#include <unordered_map>

#include "gwlab/community.hpp"
#include "gwlab/error.hpp"

namespace gwlab {

namespace {

// Merging communities a and b changes modularity by
//   ΔQ = w_ab / m - d_a d_b / (2 m²) = (2m·w_ab - d_a·d_b) / (2m²),
// with w_ab the number of edges between them and d the degree totals. The
// integer numerator orders candidate merges exactly, so tie-breaking does not
// depend on floating-point rounding.
struct Candidate {
  std::int64_t gain = 0;  // 2m·w_ab - d_a·d_b
  ClusterId a = 0;        // a < b
  ClusterId b = 0;

  // Larger gain first, then the lexicographically smallest pair.
  bool better_than(const Candidate& o) const {
    if (gain != o.gain) return gain > o.gain;
    if (a != o.a) return a < o.a;
    return b < o.b;
  }
};

struct HeapEntry {
  Candidate cand;
  ClusterId owner = 0;
  bool operator<(const HeapEntry& o) const {
    if (cand.better_than(o.cand)) return true;
    if (o.cand.better_than(cand)) return false;
    return owner < o.owner;
  }
};

class Agglomeration {
 public:
  explicit Agglomeration(const Graph& g)
      : two_m_(2 * static_cast<std::int64_t>(g.edge_count())),
        degree_(g.node_count()),
        links_(g.node_count()),
        best_(g.node_count()),
        has_best_(g.node_count(), 0),
        parent_(g.node_count()) {
    for (NodeId v = 0; v < g.node_count(); ++v) {
      parent_[v] = v;
      degree_[v] = static_cast<std::int64_t>(g.degree(v));
      for (NodeId w : g.neighbors(v)) links_[v][w] = 1;
    }
    for (NodeId v = 0; v < g.node_count(); ++v) refresh(v);
  }

  // Returns the applied gain numerator, or nullopt once no merge improves Q.
  std::optional<std::int64_t> step() {
    if (heap_.empty()) return std::nullopt;
    const Candidate top = heap_.begin()->cand;
    if (top.gain <= 0) return std::nullopt;
    merge(top.a, top.b);
    return top.gain;
  }

  std::int64_t two_m() const { return two_m_; }

  Clustering result() {
    std::vector<std::uint64_t> labels(parent_.size());
    for (std::size_t v = 0; v < parent_.size(); ++v) labels[v] = find(static_cast<ClusterId>(v));
    return Clustering::from_labels(labels);
  }

 private:
  Candidate candidate(ClusterId c, ClusterId x, std::int64_t w) const {
    Candidate out;
    out.gain = two_m_ * w - degree_[c] * degree_[x];
    out.a = std::min(c, x);
    out.b = std::max(c, x);
    return out;
  }

  void drop_entry(ClusterId c) {
    if (has_best_[c]) heap_.erase(HeapEntry{best_[c], c});
    has_best_[c] = 0;
  }

  void set_best(ClusterId c, const Candidate& cand) {
    drop_entry(c);
    best_[c] = cand;
    has_best_[c] = 1;
    heap_.insert(HeapEntry{cand, c});
  }

  // Recomputes c's best merge partner from scratch.
  void refresh(ClusterId c) {
    drop_entry(c);
    bool any = false;
    Candidate best;
    for (const auto& [x, w] : links_[c]) {
      const Candidate cand = candidate(c, x, w);
      if (!any || cand.better_than(best)) {
        best = cand;
        any = true;
      }
    }
    if (any) set_best(c, best);
  }

  ClusterId find(ClusterId c) {
    while (parent_[c] != c) {
      parent_[c] = parent_[parent_[c]];
      c = parent_[c];
    }
    return c;
  }

  void merge(ClusterId a, ClusterId b) {
    // Keep the id with the larger neighbour map so fewer entries are rehomed.
    ClusterId keep = a, gone = b;
    if (links_[b].size() > links_[a].size()) std::swap(keep, gone);

    drop_entry(keep);
    drop_entry(gone);
    parent_[gone] = keep;
    degree_[keep] += degree_[gone];
    degree_[gone] = 0;

    auto absorbed = std::move(links_[gone]);
    links_[gone].clear();
    links_[keep].erase(gone);
    for (const auto& [x, w] : absorbed) {
      if (x == keep) continue;
      links_[keep][x] += w;
      auto& xl = links_[x];
      xl.erase(gone);
      xl[keep] += w;
    }

    refresh(keep);
    for (const auto& [x, w] : links_[keep]) {
      const bool stale = has_best_[x] && (best_[x].a == keep || best_[x].b == keep ||
                                          best_[x].a == gone || best_[x].b == gone);
      if (stale || !has_best_[x]) {
        refresh(x);
        continue;
      }
      const Candidate cand = candidate(x, keep, w);
      if (cand.better_than(best_[x])) set_best(x, cand);
    }
  }

  std::int64_t two_m_;
  std::vector<std::int64_t> degree_;
  std::vector<std::unordered_map<ClusterId, std::int64_t>> links_;
  std::vector<Candidate> best_;
  std::vector<char> has_best_;
  std::vector<ClusterId> parent_;
  std::set<HeapEntry> heap_;
};

}  // namespace

Clustering greedy_modularity(const Graph& g, std::vector<double>* q_trace) {
  if (g.edge_count() == 0) throw InvalidArgument("greedy modularity needs at least one edge");
  Agglomeration agg(g);
  const double two_m = static_cast<double>(agg.two_m());
  double q = 0.0;
  if (q_trace) {
    for (NodeId v = 0; v < g.node_count(); ++v) {
      const double share = static_cast<double>(g.degree(v)) / two_m;
      q -= share * share;
    }
    q_trace->assign(1, q);
  }
  // ΔQ = gain / (2m²) = 2·gain / (2m)².
  while (auto gain = agg.step()) {
    if (q_trace) {
      q += 2.0 * static_cast<double>(*gain) / (two_m * two_m);
      q_trace->push_back(q);
    }
  }
  return agg.result();
}

}  // namespace gwlab
