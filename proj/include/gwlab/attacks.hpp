#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "gwlab/community.hpp"
#include "gwlab/graph.hpp"

namespace gwlab {

enum class AttackKind { RandomBaseline, IntraAddInterRemove, IntraRemoveInterAdd };

std::string_view to_string(AttackKind k);
/// Accepts the to_string names plus "random", "strategy1", "strategy2".
std::optional<AttackKind> parse_attack_kind(std::string_view name);

struct AttackSpec {
  AttackKind kind = AttackKind::RandomBaseline;
  std::size_t flips = 0;
  std::uint64_t seed = 0;
  /// Probability of taking the add branch on each step of the cluster-aware
  /// strategies. The attack as described uses 0.5; tests pin it to 0 or 1 to
  /// force one branch.
  double add_probability = 0.5;
};

enum class FlipAction { Add, Remove };
enum class FlipCategory { Intra, Inter, Uncategorized };

struct PerformedFlip {
  NodeId u = 0;
  NodeId v = 0;
  FlipAction action = FlipAction::Add;
  FlipCategory category = FlipCategory::Uncategorized;
};

struct AttackOutcome {
  Graph graph;
  std::vector<PerformedFlip> performed;
  std::size_t added_count = 0;
  std::size_t removed_count = 0;
  bool exhausted_early = false;
};

/// XOR-flips `flips` distinct node pairs drawn uniformly without replacement.
/// Throws InvalidArgument when flips exceeds C(n, 2) or n < 2 with flips > 0.
AttackOutcome random_flip_attack(const Graph& g_prime, const AttackSpec& spec);

/// Strategy I: per step, with probability add_probability add a uniform
/// non-adjacent pair inside a uniformly drawn cluster, else delete a uniform
/// inter-cluster edge. When the drawn branch has no eligible move the other
/// branch runs; when neither has one the attack stops with exhausted_early.
AttackOutcome intra_add_inter_remove(const Graph& g_prime, const Clustering& clustering,
                                     const AttackSpec& spec);

/// Strategy II: per step, with probability add_probability add a uniform
/// non-adjacent pair between two distinct uniformly drawn clusters, else
/// delete a uniform intra-cluster edge. Same fallback rule as Strategy I.
AttackOutcome intra_remove_inter_add(const Graph& g_prime, const Clustering& clustering,
                                     const AttackSpec& spec);

/// Dispatches on spec.kind; the clustering is ignored by the baseline.
AttackOutcome run_attack(const Graph& g_prime, const Clustering* clustering,
                         const AttackSpec& spec);

}  // namespace gwlab
