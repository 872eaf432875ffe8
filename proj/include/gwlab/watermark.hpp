#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gwlab/graph.hpp"

namespace gwlab {

/// Upper-triangular bit matrix over slot pairs i < j of a k-slot pattern.
/// Stored row-major: (0,1), (0,2), ..., (0,k-1), (1,2), ...
class PairBits {
 public:
  PairBits() = default;
  explicit PairBits(std::size_t k) : k_(k), bits_(k < 2 ? 0 : k * (k - 1) / 2, 0) {}

  std::size_t k() const noexcept { return k_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool get(std::size_t i, std::size_t j) const { return bits_[index(i, j)] != 0; }
  void set(std::size_t i, std::size_t j, bool value) { bits_[index(i, j)] = value ? 1 : 0; }
  std::size_t popcount() const;

  /// '0'/'1' string in storage order.
  std::string to_string() const;
  static PairBits from_string(std::size_t k, std::string_view bits);

  friend bool operator==(const PairBits&, const PairBits&) = default;

 private:
  std::size_t index(std::size_t i, std::size_t j) const;

  std::size_t k_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct EmbeddingParams {
  double p = 0.5;
  double delta = 0.3;
  /// Watermark node count; 0 means "derive from the host size via compute_k".
  std::size_t k = 0;
  std::uint64_t search_cap = 1'000'000;
};

/// ⌈(2 + delta) · log2 n⌉. Throws InvalidArgument for n < 2 or delta <= 0.
std::size_t compute_k(std::size_t n, double delta);

/// ⌈(k + 1) / 2⌉.
std::size_t expected_node_degree(std::size_t k);

/// (C(k, 2) + k - 1) / 2.
double watermark_density(std::size_t k);

/// Returns params with k filled in for a host of n nodes, validating p, delta
/// and search_cap.
EmbeddingParams resolve_params(const EmbeddingParams& params, std::size_t n);

struct FeasibilityReport {
  std::size_t k = 0;
  std::size_t expected_node_degree = 0;
  double wm_density = 0.0;
  std::size_t n_min = 0;
  std::size_t n_max = 0;
  /// Sampled extremes of induced edge counts; meaningless when
  /// density_samples == 0.
  std::size_t d_min_est = 0;
  std::size_t d_max_est = 0;
  std::size_t density_samples = 0;
  /// Nodes whose degree exceeds (k + 1) / 2.
  std::size_t eligible_nodes = 0;
  bool degree_ok = false;
  bool density_ok = false;
  std::string density_reason;

  bool feasible() const { return degree_ok && density_ok; }
};

/// Checks the node-degree and subgraph-density criteria.
///
/// Density extremes are estimated from `samples` connected k-subsets of the
/// subgraph induced by nodes of degree > (k + 1) / 2. Each subset grows from a
/// uniform seed node; even-numbered samples add a uniform frontier node (sparse
/// end), odd-numbered samples add the frontier node with the most links into
/// the subset (dense end).
FeasibilityReport check_feasibility(const Graph& g, const EmbeddingParams& params,
                                    std::size_t samples, std::uint64_t seed);

struct WatermarkPattern {
  std::size_t k = 0;
  PairBits bits;
  std::uint64_t seed = 0;
};

/// Erdős–Rényi pattern: every slot pair is set independently with
/// probability p, drawn from SeededRng(wm_seed, {"wm"}).
WatermarkPattern generate_watermark(std::size_t k, double p, std::uint64_t wm_seed);

/// Keyed uniform draw of k distinct hosts among nodes of degree
/// >= ⌈(k + 1) / 2⌉. Slot i is the i-th node drawn.
std::vector<NodeId> select_host_nodes(const Graph& g, std::size_t k, std::uint64_t wm_seed,
                                      std::string_view recipient_id);

/// Owner-side material needed to verify one recipient's copy.
struct RecipientRecord {
  std::string recipient_id;
  std::uint64_t wm_seed = 0;
  /// NSD of every host, computed on the watermarked graph.
  std::vector<NsdLabel> slot_labels;
  /// Host adjacency in the watermarked graph.
  PairBits expected_bits;
  EmbeddingParams params;

  std::size_t k() const { return slot_labels.size(); }
  friend bool operator==(const RecipientRecord& a, const RecipientRecord& b) {
    return a.recipient_id == b.recipient_id && a.wm_seed == b.wm_seed &&
           a.slot_labels == b.slot_labels && a.expected_bits == b.expected_bits &&
           a.params.p == b.params.p && a.params.delta == b.params.delta &&
           a.params.k == b.params.k && a.params.search_cap == b.params.search_cap;
  }
};

struct EmbedResult {
  Graph watermarked;
  RecipientRecord record;
  /// Owner-side only; used by tests.
  std::vector<NodeId> hosts;
  WatermarkPattern pattern;
};

/// Per-recipient watermark key from the owner's master secret.
std::uint64_t derive_wm_seed(std::uint64_t master_secret, std::string_view recipient_id);

/// XOR-embeds a fresh pattern into a copy of g. Throws InfeasibleError when
/// the node-degree criterion fails or fewer than k hosts are eligible; the
/// density criterion is advisory here (see check_feasibility).
EmbedResult embed(const Graph& g, const EmbeddingParams& params, std::uint64_t wm_seed,
                  std::string_view recipient_id);

enum class Verdict { Verified, NoAssignment, SearchCapExceeded, EmptyCandidateSet };
std::string_view to_string(Verdict v);

struct ExtractionResult {
  bool matched = false;
  std::optional<std::vector<NodeId>> assignment;
  std::uint64_t expansions = 0;
  Verdict verdict_reason = Verdict::NoAssignment;
};

/// Candidate nodes for every slot: nodes of g whose NSD equals the slot label
/// exactly, ascending by id.
std::vector<std::vector<NodeId>> nsd_candidates_serial(const Graph& g,
                                                       std::span<const NsdLabel> labels);
std::vector<std::vector<NodeId>> nsd_candidates_parallel(const Graph& g,
                                                         std::span<const NsdLabel> labels);

/// Strict extraction: exact NSD candidates, then backtracking over slots
/// (fewest candidates first) until every pair matches expected_bits.
ExtractionResult extract(const Graph& g_hat, const RecipientRecord& record);

struct Attribution {
  enum class Outcome { Unique, None, Ambiguous };
  Outcome outcome = Outcome::None;
  /// Matching recipient ids in record order.
  std::vector<std::string> matches;

  std::optional<std::string> recipient() const {
    if (outcome == Outcome::Unique) return matches.front();
    return std::nullopt;
  }
};

/// Runs extract for every record. Throws InvalidArgument for an empty record
/// list or duplicate recipient ids.
Attribution attribute(const Graph& g_hat, std::span<const RecipientRecord> records);

}  // namespace gwlab
