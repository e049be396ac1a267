#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pgsw/errors.hpp"
#include "pgsw/metrics.hpp"
#include "test_support.hpp"

namespace pgsw {
namespace {

using testing::random_connected_graph;

/// Floyd-Warshall hop distances.
std::vector<std::vector<std::size_t>> all_pairs(const Graph& g) {
  const std::size_t k = g.vertex_count();
  std::vector<std::vector<std::size_t>> dist(k, std::vector<std::size_t>(k, kUnreachable));
  for (VertexId v = 0; v < k; ++v) dist[v][v] = 0;
  for (const Edge& e : g.edges()) dist[e.u][e.v] = dist[e.v][e.u] = 1;
  for (std::size_t m = 0; m < k; ++m) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        if (dist[a][m] != kUnreachable && dist[m][b] != kUnreachable) {
          dist[a][b] = std::min(dist[a][b], dist[a][m] + dist[m][b]);
        }
      }
    }
  }
  return dist;
}

struct Ratio {
  std::size_t num = 0;
  std::size_t den = 0;
};

/// Exact minima over all subsets, witnesses compared as sorted vertex lists.
struct BruteCuts {
  Ratio iota{1, 0};
  std::vector<VertexId> iota_set;
  Ratio h{1, 0};
  std::vector<VertexId> h_set;
};

BruteCuts brute_cuts(const Graph& g) {
  const std::size_t k = g.vertex_count();
  BruteCuts out;
  for (std::uint32_t mask = 1; mask + 1 < (1u << k); ++mask) {
    std::vector<VertexId> set;
    std::size_t vol = 0;
    for (VertexId v = 0; v < k; ++v) {
      if (mask & (1u << v)) {
        set.push_back(v);
        vol += g.degree(v);
      }
    }
    const std::size_t cut = boundary_edges(g, set);
    auto better = [&](const Ratio& best, const std::vector<VertexId>& best_set, Ratio cand) {
      if (best.den == 0) return true;
      const std::size_t lhs = cand.num * best.den;
      const std::size_t rhs = best.num * cand.den;
      return lhs < rhs || (lhs == rhs && set < best_set);
    };
    if (2 * set.size() <= k && better(out.iota, out.iota_set, {cut, set.size()})) {
      out.iota = {cut, set.size()};
      out.iota_set = set;
    }
    if (2 * vol <= g.total_degree() && better(out.h, out.h_set, {cut, 2 * vol})) {
      out.h = {cut, 2 * vol};
      out.h_set = set;
    }
  }
  return out;
}

TEST(Bfs, MatchesAllPairsOracle) {
  Stream stream(51, "test/bfs");
  for (int i = 0; i < 30; ++i) {
    const Graph g = random_connected_graph(stream, 2 + stream.below(25), 0.1);
    const auto dist = all_pairs(g);
    for (VertexId s = 0; s < g.vertex_count(); ++s) EXPECT_EQ(bfs_distances(g, s), dist[s]);
  }
  const std::vector<Edge> edges{{0, 1}};
  const Graph split = Graph::from_edges(3, edges);
  EXPECT_EQ(bfs_distances(split, 0)[2], kUnreachable);
  EXPECT_THROW(bfs_distances(split, 5), InvalidInput);
}

TEST(Diameter, Examples) {
  EXPECT_EQ(exact_diameter(path_graph(5)).value, 4u);
  EXPECT_EQ(exact_diameter(cycle_graph(7)).value, 3u);
  EXPECT_EQ(exact_diameter(star_graph(6)).value, 2u);
  EXPECT_EQ(exact_diameter(complete_graph(5)).value, 1u);
  EXPECT_EQ(exact_diameter(path_graph(1)).value, 0u);
  const DiameterResult r = exact_diameter(path_graph(4));
  EXPECT_EQ(r.u, 0u);
  EXPECT_EQ(r.v, 3u);
  EXPECT_EQ(r.method, DiameterMethod::exact);
}

TEST(Diameter, DisconnectedGraphThrows) {
  const std::vector<Edge> edges{{0, 1}, {2, 3}};
  const Graph g = Graph::from_edges(4, edges);
  EXPECT_THROW(exact_diameter(g), Disconnected);
  Stream stream(1, "test/sweep");
  EXPECT_THROW(diameter_double_sweep(g, stream, 2), Disconnected);
}

TEST(Diameter, DoubleSweepExactOnTreesAndLowerBoundOtherwise) {
  Stream stream(52, "test/double_sweep");
  for (int i = 0; i < 50; ++i) {
    const std::size_t k = 2 + stream.below(40);
    const Graph tree = random_connected_graph(stream, k, 0.0);
    EXPECT_EQ(diameter_double_sweep(tree, stream, 1).value, exact_diameter(tree).value);
    const Graph g = random_connected_graph(stream, k, 0.08);
    const DiameterResult sweep = diameter_double_sweep(g, stream, 3);
    EXPECT_LE(sweep.value, exact_diameter(g).value);
    EXPECT_EQ(bfs_distances(g, sweep.u)[sweep.v], sweep.value);
    EXPECT_EQ(sweep.method, DiameterMethod::double_sweep);
  }
  EXPECT_EQ(diameter_auto(path_graph(30), 1).method, DiameterMethod::exact);
}

TEST(MaxDegree, ExamplesAndRatio) {
  EXPECT_EQ(max_degree(star_graph(5)).value, 4u);
  EXPECT_EQ(max_degree(path_graph(4)).argmax, 1u);
  EXPECT_THROW(max_degree(Graph::from_edges(0, {})), InvalidInput);
  EXPECT_NEAR(degree_log_ratio(10, std::exp(2.0), 1.5), 10 / std::pow(2.0, 1.5), 1e-12);
}

TEST(Cuts, Examples) {
  const CutReport edge = exhaustive_cuts(path_graph(2));
  EXPECT_EQ(*edge.iota, 1.0);
  EXPECT_EQ(*edge.h, 0.5);
  EXPECT_EQ(edge.iota_witness, (std::vector<VertexId>{0}));

  const CutReport path = exhaustive_cuts(path_graph(4));
  EXPECT_DOUBLE_EQ(*path.iota, 0.5);
  EXPECT_EQ(path.iota_witness, (std::vector<VertexId>{0, 1}));
  EXPECT_DOUBLE_EQ(*path.h, 1.0 / 6);

  const CutReport cycle = exhaustive_cuts(cycle_graph(6));
  EXPECT_DOUBLE_EQ(*cycle.iota, 2.0 / 3);
  EXPECT_DOUBLE_EQ(*cycle.h, 1.0 / 6);

  const CutReport k4 = exhaustive_cuts(complete_graph(4));
  EXPECT_DOUBLE_EQ(*k4.iota, 2.0);
  EXPECT_DOUBLE_EQ(*k4.h, 4.0 / 12);

  EXPECT_DOUBLE_EQ(*isoperimetric_exact(star_graph(5)).iota, 1.0);
}

TEST(Cuts, GuardsAndBadInput) {
  EXPECT_THROW(exhaustive_cuts(path_graph(21)), GuardExceeded);
  EXPECT_THROW(exhaustive_cuts(path_graph(1)), GuardExceeded);
  EXPECT_THROW(exhaustive_cuts(Graph::from_edges(3, {})), InvalidInput);
  EXPECT_THROW(boundary_edges(path_graph(3), {7}), InvalidInput);
}

TEST(Cuts, ExhaustiveMatchesSubsetOracle) {
  Stream stream(53, "test/cuts");
  for (int i = 0; i < 150; ++i) {
    const std::size_t k = 2 + stream.below(11);
    const Graph g = random_connected_graph(stream, k, stream.uniform() * 0.6);
    const CutReport report = exhaustive_cuts(g);
    const BruteCuts brute = brute_cuts(g);
    EXPECT_EQ(*report.iota, static_cast<double>(brute.iota.num) / brute.iota.den);
    EXPECT_EQ(*report.h, static_cast<double>(brute.h.num) / brute.h.den);
    EXPECT_EQ(report.iota_witness, brute.iota_set) << g.dump();
    EXPECT_EQ(report.h_witness, brute.h_set) << g.dump();
    EXPECT_EQ(static_cast<double>(boundary_edges(g, report.iota_witness)) / report.iota_witness.size(),
              *report.iota);
  }
}

TEST(DiameterBound, Examples) {
  const DiameterBoundCheck edge = check_diameter_bound(path_graph(2), 1.0, 1);
  EXPECT_EQ(edge.lhs, 1.0);
  EXPECT_NEAR(edge.rhs, 4 * std::log(2.0), 1e-12);
  EXPECT_TRUE(edge.holds);
  const DiameterBoundCheck path = check_diameter_bound(path_graph(8), 0.25, 2);
  EXPECT_NEAR(path.rhs, 32 * std::log(8.0), 1e-12);
  EXPECT_THROW(check_diameter_bound(path_graph(2), 0.0, 1), InvalidInput);
}

/// Every graph on k labelled vertices, by edge mask.
std::vector<Graph> all_connected_graphs(std::size_t k) {
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (VertexId u = 0; u < k; ++u) {
    for (VertexId v = u + 1; v < k; ++v) pairs.emplace_back(u, v);
  }
  std::vector<Graph> out;
  for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (mask & (1u << i)) edges.push_back({pairs[i].first, pairs[i].second});
    }
    Graph g = Graph::from_edges(k, edges);
    if (g.connected()) out.push_back(std::move(g));
  }
  return out;
}

TEST(DiameterBound, HoldsOnEverySmallGraph) {
  for (std::size_t k = 2; k <= 6; ++k) {
    for (const Graph& g : all_connected_graphs(k)) {
      const CutReport cuts = exhaustive_cuts(g);
      ASSERT_TRUE(check_diameter_bound(g, *cuts.iota, max_degree(g).value).holds) << g.dump();
    }
  }
  Stream stream(54, "test/bound");
  for (int i = 0; i < 2000; ++i) {
    const Graph g = random_connected_graph(stream, 7 + stream.below(2), stream.uniform() * 0.5);
    const CutReport cuts = exhaustive_cuts(g);
    ASSERT_TRUE(check_diameter_bound(g, *cuts.iota, max_degree(g).value).holds) << g.dump();
  }
}

}  // namespace
}  // namespace pgsw
