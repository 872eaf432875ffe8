#include "gwlab/watermark.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "gwlab/error.hpp"
#include "gwlab/rng.hpp"

namespace gwlab {

std::size_t PairBits::index(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  if (i == j || j >= k_) throw InvalidArgument("invalid slot pair");
  // Offset of row i is sum_{r<i} (k-1-r) = i*(2k-i-1)/2.
  return i * (2 * k_ - i - 1) / 2 + (j - i - 1);
}

std::size_t PairBits::popcount() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string PairBits::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) s[i] = '1';
  return s;
}

PairBits PairBits::from_string(std::size_t k, std::string_view bits) {
  PairBits out(k);
  if (bits.size() != out.bits_.size())
    throw ParseError("bit string has length " + std::to_string(bits.size()) + ", expected " +
                     std::to_string(out.bits_.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') throw ParseError("bit string contains non-binary digit");
    out.bits_[i] = bits[i] == '1';
  }
  return out;
}

std::size_t compute_k(std::size_t n, double delta) {
  if (n < 2) throw InvalidArgument("compute_k needs at least 2 nodes");
  if (!(delta > 0)) throw InvalidArgument("delta must be positive");
  return static_cast<std::size_t>(std::ceil((2.0 + delta) * std::log2(static_cast<double>(n))));
}

std::size_t expected_node_degree(std::size_t k) { return (k + 2) / 2; }

double watermark_density(std::size_t k) {
  const double pairs = static_cast<double>(k) * static_cast<double>(k - 1) / 2.0;
  return (pairs + static_cast<double>(k) - 1.0) / 2.0;
}

EmbeddingParams resolve_params(const EmbeddingParams& params, std::size_t n) {
  if (!(params.p >= 0.0 && params.p <= 1.0)) throw InvalidArgument("p must lie in [0, 1]");
  if (!(params.delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (params.search_cap < 1) throw InvalidArgument("search_cap must be at least 1");
  EmbeddingParams out = params;
  if (out.k == 0) out.k = compute_k(n, params.delta);
  if (out.k < 2) throw InvalidArgument("k must be at least 2");
  return out;
}

namespace {

struct GrowthScratch {
  std::vector<std::uint32_t> in_set;
  std::vector<std::uint32_t> in_frontier;
  std::vector<std::uint32_t> links;
  std::vector<std::uint32_t> frontier_pos;
  std::vector<NodeId> frontier;

  explicit GrowthScratch(std::size_t n)
      : in_set(n, 0), in_frontier(n, 0), links(n, 0), frontier_pos(n, 0) {}
};

// Grows a connected k-subset inside the eligible subgraph. Returns the induced
// edge count, or nullopt when the component is smaller than k.
std::optional<std::size_t> grow_subset(const Graph& g, const std::vector<char>& eligible,
                                       std::span<const NodeId> eligible_nodes, std::size_t k,
                                       bool densest, std::uint32_t stamp, SeededRng& rng,
                                       GrowthScratch& s) {
  s.frontier.clear();
  std::size_t density = 0;
  auto push = [&](NodeId v) {
    s.in_set[v] = stamp;
    for (NodeId w : g.neighbors(v)) {
      if (!eligible[w] || s.in_set[w] == stamp) continue;
      if (s.in_frontier[w] != stamp) {
        s.in_frontier[w] = stamp;
        s.links[w] = 1;
        s.frontier_pos[w] = static_cast<std::uint32_t>(s.frontier.size());
        s.frontier.push_back(w);
      } else {
        ++s.links[w];
      }
    }
  };
  auto take = [&](std::size_t pos) {
    const NodeId v = s.frontier[pos];
    density += s.links[v];
    const NodeId last = s.frontier.back();
    s.frontier[pos] = last;
    s.frontier_pos[last] = static_cast<std::uint32_t>(pos);
    s.frontier.pop_back();
    s.in_frontier[v] = 0;
    push(v);
  };

  push(eligible_nodes[rng.uniform_below(eligible_nodes.size())]);
  std::vector<std::size_t> best;
  for (std::size_t size = 1; size < k; ++size) {
    if (s.frontier.empty()) return std::nullopt;
    if (!densest) {
      take(rng.uniform_below(s.frontier.size()));
      continue;
    }
    best.clear();
    std::uint32_t top = 0;
    for (std::size_t i = 0; i < s.frontier.size(); ++i) {
      const auto l = s.links[s.frontier[i]];
      if (l > top) {
        top = l;
        best.clear();
      }
      if (l == top) best.push_back(i);
    }
    take(best[rng.uniform_below(best.size())]);
  }
  return density;
}

}  // namespace

FeasibilityReport check_feasibility(const Graph& g, const EmbeddingParams& params,
                                    std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("check_feasibility needs at least one sample");
  const EmbeddingParams resolved = resolve_params(params, g.node_count());
  const std::size_t k = resolved.k;

  FeasibilityReport report;
  report.k = k;
  report.expected_node_degree = expected_node_degree(k);
  report.wm_density = watermark_density(k);
  if (g.node_count() > 0) {
    report.n_min = std::numeric_limits<std::size_t>::max();
    for (NodeId v = 0; v < g.node_count(); ++v) {
      report.n_min = std::min(report.n_min, g.degree(v));
      report.n_max = std::max(report.n_max, g.degree(v));
    }
  }
  report.degree_ok = g.node_count() > 0 && report.n_min <= report.expected_node_degree &&
                     report.expected_node_degree <= report.n_max;

  // Degree strictly above (k + 1) / 2, i.e. 2·deg > k + 1.
  std::vector<char> eligible(g.node_count(), 0);
  std::vector<NodeId> eligible_nodes;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (2 * g.degree(v) > k + 1) {
      eligible[v] = 1;
      eligible_nodes.push_back(v);
    }
  }
  report.eligible_nodes = eligible_nodes.size();
  if (eligible_nodes.size() < k) {
    report.density_reason = "only " + std::to_string(eligible_nodes.size()) +
                            " nodes have degree above (k+1)/2; need k = " + std::to_string(k);
    return report;
  }

  const auto total = static_cast<std::int64_t>(samples);
  std::vector<std::optional<std::size_t>> densities(samples);
#pragma omp parallel
  {
    GrowthScratch scratch(g.node_count());
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < total; ++i) {
      SeededRng rng(seed, {"feasibility", std::to_string(i)});
      const bool densest = (i % 2) == 1;
      densities[static_cast<std::size_t>(i)] =
          grow_subset(g, eligible, eligible_nodes, k, densest, static_cast<std::uint32_t>(i + 1),
                      rng, scratch);
    }
  }

  report.d_min_est = std::numeric_limits<std::size_t>::max();
  for (const auto& d : densities) {
    if (!d) continue;
    ++report.density_samples;
    report.d_min_est = std::min(report.d_min_est, *d);
    report.d_max_est = std::max(report.d_max_est, *d);
  }
  if (report.density_samples == 0) {
    report.d_min_est = 0;
    report.density_reason = "no connected " + std::to_string(k) +
                            "-node subgraph found among eligible nodes in " +
                            std::to_string(samples) + " attempts";
    return report;
  }
  report.density_ok = static_cast<double>(report.d_min_est) <= report.wm_density &&
                      report.wm_density <= static_cast<double>(report.d_max_est);
  if (!report.density_ok)
    report.density_reason = "watermark density outside sampled range";
  return report;
}

WatermarkPattern generate_watermark(std::size_t k, double p, std::uint64_t wm_seed) {
  if (k < 2) throw InvalidArgument("watermark needs k >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in [0, 1]");
  WatermarkPattern w{k, PairBits(k), wm_seed};
  SeededRng rng(wm_seed, {"wm"});
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) w.bits.set(i, j, rng.bernoulli(p));
  return w;
}

std::vector<NodeId> select_host_nodes(const Graph& g, std::size_t k, std::uint64_t wm_seed,
                                      std::string_view recipient_id) {
  const std::size_t min_degree = expected_node_degree(k);
  std::vector<NodeId> pool;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (g.degree(v) >= min_degree) pool.push_back(v);
  if (pool.size() < k)
    throw InfeasibleError("only " + std::to_string(pool.size()) + " nodes have degree >= " +
                          std::to_string(min_degree) + "; need k = " + std::to_string(k));
  SeededRng rng(wm_seed, {"hosts", recipient_id});
  std::vector<NodeId> hosts;
  hosts.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_below(pool.size() - i));
    std::swap(pool[i], pool[j]);
    hosts.push_back(pool[i]);
  }
  return hosts;
}

std::uint64_t derive_wm_seed(std::uint64_t master_secret, std::string_view recipient_id) {
  return derive_seed(master_secret, {"recipient", recipient_id});
}

EmbedResult embed(const Graph& g, const EmbeddingParams& params, std::uint64_t wm_seed,
                  std::string_view recipient_id) {
  const EmbeddingParams resolved = resolve_params(params, g.node_count());
  const std::size_t k = resolved.k;
  const std::size_t need = expected_node_degree(k);
  std::size_t n_min = std::numeric_limits<std::size_t>::max(), n_max = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    n_min = std::min(n_min, g.degree(v));
    n_max = std::max(n_max, g.degree(v));
  }
  if (!(n_min <= need && need <= n_max))
    throw InfeasibleError("node-degree criterion fails: expected watermark degree " +
                          std::to_string(need) + " outside [" + std::to_string(n_min) + ", " +
                          std::to_string(n_max) + "]");

  EmbedResult out;
  out.hosts = select_host_nodes(g, k, wm_seed, recipient_id);
  out.pattern = generate_watermark(k, resolved.p, wm_seed);
  out.watermarked = g;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (out.pattern.bits.get(i, j)) out.watermarked.flip_edge(out.hosts[i], out.hosts[j]);

  RecipientRecord& rec = out.record;
  rec.recipient_id = std::string(recipient_id);
  rec.wm_seed = wm_seed;
  rec.params = resolved;
  rec.expected_bits = PairBits(k);
  rec.slot_labels.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    rec.slot_labels.push_back(nsd(out.watermarked, out.hosts[i]));
    for (std::size_t j = i + 1; j < k; ++j)
      rec.expected_bits.set(i, j, out.watermarked.has_edge(out.hosts[i], out.hosts[j]));
  }
  return out;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "Verified";
    case Verdict::NoAssignment: return "NoAssignment";
    case Verdict::SearchCapExceeded: return "SearchCapExceeded";
    case Verdict::EmptyCandidateSet: return "EmptyCandidateSet";
  }
  return "Unknown";
}

namespace {

// Distinct labels and, per distinct label, the slots carrying it.
struct LabelIndex {
  std::vector<NsdLabel> distinct;
  std::vector<std::vector<std::size_t>> slots;
  std::vector<char> length_wanted;

  explicit LabelIndex(std::span<const NsdLabel> labels) {
    std::map<NsdLabel, std::size_t> ids;
    std::size_t max_len = 0;
    for (std::size_t s = 0; s < labels.size(); ++s) {
      auto [it, inserted] = ids.try_emplace(labels[s], distinct.size());
      if (inserted) {
        distinct.push_back(labels[s]);
        slots.emplace_back();
      }
      slots[it->second].push_back(s);
      max_len = std::max(max_len, labels[s].degrees.size());
    }
    length_wanted.assign(max_len + 1, 0);
    for (const auto& l : distinct) length_wanted[l.degrees.size()] = 1;
  }

  // Index into `distinct`, or -1.
  std::int64_t match(const Graph& g, NodeId v) const {
    const std::size_t d = g.degree(v);
    if (d >= length_wanted.size() || !length_wanted[d]) return -1;
    const NsdLabel label = nsd(g, v);
    auto it = std::lower_bound(sorted_.begin(), sorted_.end(), label,
                               [&](std::size_t i, const NsdLabel& l) { return distinct[i] < l; });
    if (it != sorted_.end() && distinct[*it] == label) return static_cast<std::int64_t>(*it);
    return -1;
  }

  void finalize() {
    sorted_.resize(distinct.size());
    std::iota(sorted_.begin(), sorted_.end(), std::size_t{0});
    std::sort(sorted_.begin(), sorted_.end(),
              [&](std::size_t a, std::size_t b) { return distinct[a] < distinct[b]; });
  }

 private:
  std::vector<std::size_t> sorted_;
};

std::vector<std::vector<NodeId>> gather(const LabelIndex& index, std::size_t slot_count,
                                        const std::vector<std::int64_t>& matched) {
  std::vector<std::vector<NodeId>> out(slot_count);
  for (NodeId v = 0; v < matched.size(); ++v) {
    if (matched[v] < 0) continue;
    for (std::size_t s : index.slots[static_cast<std::size_t>(matched[v])]) out[s].push_back(v);
  }
  return out;
}

}  // namespace

std::vector<std::vector<NodeId>> nsd_candidates_serial(const Graph& g,
                                                       std::span<const NsdLabel> labels) {
  LabelIndex index(labels);
  index.finalize();
  std::vector<std::int64_t> matched(g.node_count(), -1);
  for (NodeId v = 0; v < g.node_count(); ++v) matched[v] = index.match(g, v);
  return gather(index, labels.size(), matched);
}

std::vector<std::vector<NodeId>> nsd_candidates_parallel(const Graph& g,
                                                         std::span<const NsdLabel> labels) {
  LabelIndex index(labels);
  index.finalize();
  const auto n = static_cast<std::int64_t>(g.node_count());
  std::vector<std::int64_t> matched(g.node_count(), -1);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t v = 0; v < n; ++v)
    matched[static_cast<std::size_t>(v)] = index.match(g, static_cast<NodeId>(v));
  return gather(index, labels.size(), matched);
}

namespace {

class SlotSearch {
 public:
  SlotSearch(const Graph& g, const RecipientRecord& record,
             std::vector<std::vector<NodeId>> candidates)
      : g_(g), record_(record), candidates_(std::move(candidates)) {
    const std::size_t k = candidates_.size();
    order_.resize(k);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return candidates_[a].size() < candidates_[b].size();
    });
    assignment_.assign(k, 0);
  }

  ExtractionResult run() {
    ExtractionResult result;
    const bool found = descend(0);
    result.expansions = expansions_;
    if (found) {
      result.matched = true;
      result.assignment = assignment_;
      result.verdict_reason = Verdict::Verified;
    } else {
      result.verdict_reason = capped_ ? Verdict::SearchCapExceeded : Verdict::NoAssignment;
    }
    return result;
  }

 private:
  bool descend(std::size_t depth) {
    if (depth == order_.size()) return true;
    const std::size_t slot = order_[depth];
    for (NodeId c : candidates_[slot]) {
      if (used_.contains(c)) continue;
      if (++expansions_ > record_.params.search_cap) {
        capped_ = true;
        return false;
      }
      if (!consistent(depth, slot, c)) continue;
      assignment_[slot] = c;
      used_.insert(c);
      if (descend(depth + 1)) return true;
      used_.erase(c);
      if (capped_) return false;
    }
    return false;
  }

  bool consistent(std::size_t depth, std::size_t slot, NodeId c) const {
    for (std::size_t d = 0; d < depth; ++d) {
      const std::size_t other = order_[d];
      if (g_.has_edge(c, assignment_[other]) != record_.expected_bits.get(slot, other))
        return false;
    }
    return true;
  }

  const Graph& g_;
  const RecipientRecord& record_;
  std::vector<std::vector<NodeId>> candidates_;
  std::vector<std::size_t> order_;
  std::vector<NodeId> assignment_;
  std::set<NodeId> used_;
  std::uint64_t expansions_ = 0;
  bool capped_ = false;
};

}  // namespace

ExtractionResult extract(const Graph& g_hat, const RecipientRecord& record) {
  ExtractionResult result;
  if (record.k() < 2 || record.expected_bits.k() != record.k()) {
    result.verdict_reason = Verdict::NoAssignment;
    return result;
  }
  auto candidates = nsd_candidates_parallel(g_hat, record.slot_labels);
  for (const auto& c : candidates) {
    if (c.empty()) {
      result.verdict_reason = Verdict::EmptyCandidateSet;
      return result;
    }
  }
  return SlotSearch(g_hat, record, std::move(candidates)).run();
}

Attribution attribute(const Graph& g_hat, std::span<const RecipientRecord> records) {
  if (records.empty()) throw InvalidArgument("attribute needs at least one recipient record");
  std::set<std::string> seen;
  for (const auto& r : records)
    if (!seen.insert(r.recipient_id).second)
      throw InvalidArgument("duplicate recipient id: " + r.recipient_id);
  Attribution out;
  for (const auto& r : records)
    if (extract(g_hat, r).matched) out.matches.push_back(r.recipient_id);
  if (out.matches.size() == 1)
    out.outcome = Attribution::Outcome::Unique;
  else if (out.matches.empty())
    out.outcome = Attribution::Outcome::None;
  else
    out.outcome = Attribution::Outcome::Ambiguous;
  return out;
}

}  // namespace gwlab
