#pragma once

#include <optional>
#include <span>
#include <string>

#include "gwlab/attacks.hpp"
#include "gwlab/graph.hpp"
#include "gwlab/watermark.hpp"

namespace gwlab {

/// |E(G') ⊕ E(Ĝ)| / |E(G')| · 100. Throws InvalidArgument for an edgeless G'.
double edit_distance(const Graph& g_prime, const Graph& g_hat);

/// ‖V_G' − V_Ĝ‖₂ / ‖V_G'‖₂ over the union of both dK-2 supports.
double dk2_deviation(const Graph& g_prime, const Graph& g_hat);

/// (C(Ĝ) − C(G')) / C(G') · 100, or nullopt when C(G') = 0.
std::optional<double> clustering_coefficient_change(const Graph& g_prime, const Graph& g_hat);

struct DistortionReport {
  double ed_pct = 0.0;
  double dk2 = 0.0;
  std::optional<double> dcc_pct;
};

DistortionReport measure_distortion(const Graph& g_prime, const Graph& g_hat);

struct TrialRecord {
  std::string dataset;
  AttackKind attack = AttackKind::RandomBaseline;
  std::string clustering;  // detector name, "none" for the baseline, or a file tag
  std::size_t flips = 0;
  std::size_t trial = 0;
  bool extracted = false;
  DistortionReport distortion;
  double attack_ms = 0.0;
  double extract_ms = 0.0;
};

/// Percentage of extracted trials. All trials must share dataset, attack,
/// clustering and flips; throws InvalidArgument otherwise or when empty.
double success_rate(std::span<const TrialRecord> trials);

}  // namespace gwlab
