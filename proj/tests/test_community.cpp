#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "gwlab/community.hpp"
#include "gwlab/error.hpp"
#include "support.hpp"

using namespace gwlab;
using namespace gwlab::testing;

namespace {

Clustering from(std::vector<std::uint64_t> labels) { return Clustering::from_labels(labels); }

// Planted blocks recovered exactly (up to renaming).
bool recovers_blocks(const Clustering& c, std::size_t blocks, std::size_t size) {
  if (c.num_clusters != blocks) return false;
  for (NodeId v = 0; v < blocks * size; ++v)
    if (c.cluster_of(v) != c.cluster_of(static_cast<NodeId>(v / size * size))) return false;
  return true;
}

bool modal_everywhere(const Graph& g, const Clustering& c) {
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) == 0) continue;
    std::map<ClusterId, int> count;
    for (NodeId u : g.neighbors(v)) ++count[c.cluster_of(u)];
    int best = 0;
    for (auto& [_, n] : count) best = std::max(best, n);
    if (count[c.cluster_of(v)] != best) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("community") {
  TEST_CASE("modularity hand values") {
    const Graph two = disjoint_cliques(2, 3);
    CHECK(std::abs(modularity(two, from({0, 0, 0, 1, 1, 1})) - 0.5) < 1e-12);
    CHECK(std::abs(modularity(two, from({0, 0, 0, 0, 0, 0}))) < 1e-12);
    CHECK(std::abs(modularity(complete_graph(3), from({0, 1, 2})) + 1.0 / 3.0) < 1e-12);
    CHECK_THROWS_AS(modularity(Graph(3), from({0, 0, 0})), InvalidArgument);
  }

  TEST_CASE("modularity matches the definition") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Graph g = er_graph_nm(30, 60, s);
      std::vector<std::uint64_t> labels(30);
      for (NodeId v = 0; v < 30; ++v) labels[v] = (v * 7 + s) % 4;
      const auto c = Clustering::from_labels(labels);
      CHECK(std::abs(modularity(g, c) - oracle_modularity(30, edge_set(g), c.assignment)) < 1e-12);
    }
  }

  TEST_CASE("from_labels densifies in node order") {
    const auto c = from({9, 4, 9, 7});
    CHECK(c.assignment == std::vector<ClusterId>{0, 1, 0, 2});
    CHECK(c.num_clusters == 3);
    CHECK(c.members[0] == std::vector<NodeId>{0, 2});
    CHECK_NOTHROW(c.validate(4));
  }

  TEST_CASE("label propagation") {
    const auto two = label_propagation(disjoint_cliques(2, 3), 1);
    CHECK(two == from({0, 0, 0, 1, 1, 1}));
    CHECK(label_propagation(Graph(1), 1).num_clusters == 1);

    int recovered = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Graph g = planted_partition(2, 32, 0.5, 0.02, s);
      LabelPropagationStats stats;
      const auto c = label_propagation(g, s, &stats);
      CHECK_NOTHROW(c.validate(g.node_count()));
      if (stats.converged) CHECK(modal_everywhere(g, c));
      recovered += recovers_blocks(c, 2, 32);
    }
    CHECK(recovered >= 9);
  }

  TEST_CASE("label propagation fixpoint and determinism on random graphs") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Graph g = er_graph_nm(200, 500, s);
      LabelPropagationStats stats;
      const auto c = label_propagation(g, s, &stats);
      CHECK(stats.rounds <= kLabelPropagationMaxRounds);
      if (stats.converged) CHECK(modal_everywhere(g, c));
      CHECK(label_propagation(g, s) == c);
    }
  }

  TEST_CASE("greedy modularity") {
    const Graph two = disjoint_cliques(2, 3);
    const auto c = greedy_modularity(two);
    CHECK(c == from({0, 0, 0, 1, 1, 1}));
    CHECK(std::abs(modularity(two, c) - 0.5) < 1e-12);
    CHECK(greedy_modularity(complete_graph(4)).num_clusters == 1);
    CHECK_THROWS_AS(greedy_modularity(Graph(4)), InvalidArgument);
  }

  TEST_CASE("greedy modularity trace is increasing and self-consistent") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Graph g = planted_partition(4, 25, 0.3, 0.03, s);
      std::vector<double> trace;
      const auto c = greedy_modularity(g, &trace);
      REQUIRE(trace.size() >= 2);
      for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] > trace[i - 1]);
      CHECK(std::abs(trace.back() - modularity(g, c)) < 1e-9);
      CHECK(std::abs(modularity(g, c) - oracle_modularity(g.node_count(), edge_set(g), c.assignment)) <
            1e-12);
      CHECK(greedy_modularity(g) == c);
    }
  }

  TEST_CASE("leiden") {
    CHECK(leiden(disjoint_cliques(4, 5), 3) == from({0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2,
                                                      3, 3, 3, 3, 3}));
    CHECK_THROWS_AS(leiden(Graph(3), 1), InvalidArgument);
    int recovered = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Graph g = planted_partition(2, 32, 0.5, 0.02, s);
      const auto c = leiden(g, s);
      recovered += recovers_blocks(c, 2, 32);
      CHECK(clusters_connected(g, c));
    }
    CHECK(recovered >= 9);
  }

  TEST_CASE("leiden communities are connected and deterministic") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Graph g = er_graph_nm(300, 600, s);
      const auto c = leiden(g, s);
      CHECK_NOTHROW(c.validate(g.node_count()));
      // independent connectivity check: every cluster is one component of
      // its induced subgraph
      EdgeSet inside;
      for (auto [u, v] : edge_set(g))
        if (c.cluster_of(u) == c.cluster_of(v)) inside.emplace(u, v);
      const auto comp = oracle_components(g.node_count(), inside);
      for (const auto& m : c.members)
        for (NodeId v : m) CHECK(comp[v] == comp[m.front()]);
      CHECK(leiden(g, s) == c);
      CHECK(modularity(g, c) > 0.3);
    }
  }

  TEST_CASE("isolated nodes are singletons") {
    const Graph g = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 0}});
    for (Detector d : {Detector::GreedyModularity, Detector::LabelPropagation, Detector::Leiden}) {
      const auto c = run_detector(d, g, 4);
      CHECK(c.members[c.cluster_of(3)].size() == 1);
      CHECK(c.members[c.cluster_of(4)].size() == 1);
      CHECK(c.cluster_of(3) != c.cluster_of(4));
    }
  }

  TEST_CASE("split_disconnected") {
    const Graph g = Graph::from_edges(4, {{0, 1}, {2, 3}});
    const auto c = split_disconnected(g, from({0, 0, 0, 0}));
    CHECK(c.num_clusters == 2);
    CHECK(clusters_connected(g, c));
    CHECK_FALSE(clusters_connected(g, from({0, 0, 0, 0})));
  }

  TEST_CASE("detector names") {
    CHECK(parse_detector("greedy") == Detector::GreedyModularity);
    CHECK(parse_detector("lpa") == Detector::LabelPropagation);
    CHECK(parse_detector("leiden") == Detector::Leiden);
    CHECK_FALSE(parse_detector("infomap"));
  }

  TEST_CASE("clustering file import") {
    std::istringstream edges("a b\nb c\nc d\n");
    const auto lg = load_edge_list(edges);
    std::istringstream one("# all\na x\nb x\nc x\nd x\n");
    CHECK(load_clustering(one, lg.labels).num_clusters == 1);

    std::istringstream missing("a 1\nb 1\nc 2\n");
    try {
      load_clustering(missing, lg.labels);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("\"d\"") != std::string::npos);
    }
    std::istringstream unknown("a 1\nb 1\nc 2\nd 2\nzz 3\n");
    CHECK_THROWS_AS(load_clustering(unknown, lg.labels), ParseError);
    std::istringstream twice("a 1\na 1\nb 1\nc 2\nd 2\n");
    CHECK_THROWS_AS(load_clustering(twice, lg.labels), ParseError);
    std::istringstream malformed("a\n");
    CHECK_THROWS_AS(load_clustering(malformed, lg.labels), ParseError);
  }

  TEST_CASE("clustering export then import is the identity") {
    std::ostringstream text;
    const Graph g = planted_partition(3, 20, 0.5, 0.05, 1);
    const auto map = NodeLabelMap::identity(g.node_count());
    const auto c = leiden(g, 1);
    write_clustering(text, c, map);
    std::istringstream in(text.str());
    CHECK(load_clustering(in, map) == c);
  }
}
