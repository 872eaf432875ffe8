#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "gwlab/graph.hpp"

namespace gwlab {

/// Unordered degree pair (low, high) with low <= high.
using DegreePair = std::pair<std::uint32_t, std::uint32_t>;

/// dK-2 series: probability mass of each degree pair over the edge set.
struct JointDegreeVector {
  std::map<DegreePair, double> entries;
};

// Kernels come in a serial reference form and an OpenMP form; both must agree
// exactly (integer results). Public entry points use the OpenMP form.

std::uint64_t count_triangles_serial(const Graph& g);
std::uint64_t count_triangles_parallel(const Graph& g);

/// Number of paths of length two (Σ_v C(deg v, 2)).
std::uint64_t count_connected_triples(const Graph& g);

/// 3·triangles / connected triples; 0 for a graph without connected triples.
double global_clustering_coefficient(const Graph& g);

std::map<DegreePair, std::uint64_t> degree_pair_counts_serial(const Graph& g);
std::map<DegreePair, std::uint64_t> degree_pair_counts_parallel(const Graph& g);

/// Empty for an edgeless graph, else masses sum to one.
JointDegreeVector joint_degree_vector(const Graph& g);

}  // namespace gwlab
