#include "gwlab/metrics.hpp"

#include <cmath>

#include "gwlab/error.hpp"
#include "gwlab/structure.hpp"

namespace gwlab {

double edit_distance(const Graph& g_prime, const Graph& g_hat) {
  if (g_prime.edge_count() == 0) throw InvalidArgument("edit distance needs |E(G')| > 0");
  return static_cast<double>(edge_symmetric_difference(g_prime, g_hat)) /
         static_cast<double>(g_prime.edge_count()) * 100.0;
}

double dk2_deviation(const Graph& g_prime, const Graph& g_hat) {
  if (g_prime.edge_count() == 0) throw InvalidArgument("dK-2 deviation needs |E(G')| > 0");
  const auto a = joint_degree_vector(g_prime).entries;
  const auto b = joint_degree_vector(g_hat).entries;
  double diff = 0.0, norm = 0.0;
  auto i = a.begin();
  auto j = b.begin();
  // Merge walk over the union of two sorted supports.
  while (i != a.end() || j != b.end()) {
    double x = 0.0, y = 0.0;
    if (j == b.end() || (i != a.end() && i->first < j->first)) {
      x = (i++)->second;
    } else if (i == a.end() || j->first < i->first) {
      y = (j++)->second;
    } else {
      x = (i++)->second;
      y = (j++)->second;
    }
    diff += (x - y) * (x - y);
    norm += x * x;
  }
  return std::sqrt(diff) / std::sqrt(norm);
}

std::optional<double> clustering_coefficient_change(const Graph& g_prime, const Graph& g_hat) {
  const double before = global_clustering_coefficient(g_prime);
  if (before <= 0.0) return std::nullopt;
  return (global_clustering_coefficient(g_hat) - before) / before * 100.0;
}

DistortionReport measure_distortion(const Graph& g_prime, const Graph& g_hat) {
  return {edit_distance(g_prime, g_hat), dk2_deviation(g_prime, g_hat),
          clustering_coefficient_change(g_prime, g_hat)};
}

double success_rate(std::span<const TrialRecord> trials) {
  if (trials.empty()) throw InvalidArgument("success rate of an empty trial group");
  const auto& head = trials.front();
  std::size_t hits = 0;
  for (const auto& t : trials) {
    if (t.dataset != head.dataset || t.attack != head.attack || t.clustering != head.clustering ||
        t.flips != head.flips)
      throw InvalidArgument("success rate over mixed trial groups");
    hits += t.extracted ? 1 : 0;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(trials.size());
}

}  // namespace gwlab
