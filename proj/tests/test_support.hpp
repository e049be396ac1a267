#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <vector>

#include "pgsw/geometry.hpp"
#include "pgsw/graph.hpp"
#include "pgsw/rng.hpp"

namespace pgsw::testing {

/// Uniform coordinates in [0, n)^d.
inline std::vector<double> uniform_coords(Stream& stream, std::size_t count, int d, double n) {
  std::vector<double> coords(count * static_cast<std::size_t>(d));
  for (double& x : coords) x = stream.uniform() * n;
  return coords;
}

/// Connected random graph: a random spanning tree plus each other pair with probability p.
inline Graph random_connected_graph(Stream& stream, std::size_t k, double p) {
  std::vector<std::vector<bool>> present(k, std::vector<bool>(k, false));
  std::vector<Edge> edges;
  for (VertexId v = 1; v < k; ++v) {
    const auto u = static_cast<VertexId>(stream.below(v));
    present[u][v] = true;
    edges.push_back({u, v, EdgeTag::short_edge});
  }
  for (VertexId u = 0; u < k; ++u) {
    for (VertexId v = u + 1; v < k; ++v) {
      if (!present[u][v] && stream.uniform() < p) edges.push_back({u, v, EdgeTag::short_edge});
    }
  }
  return Graph::from_edges(k, edges);
}

/// Component labels (smallest member) from an adjacency predicate, by plain BFS.
template <class Adjacent>
std::vector<std::size_t> bfs_labels(std::size_t count, Adjacent&& adjacent) {
  std::vector<std::size_t> label(count, count);
  for (std::size_t s = 0; s < count; ++s) {
    if (label[s] != count) continue;
    label[s] = s;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t a = queue.front();
      queue.pop_front();
      for (std::size_t b = 0; b < count; ++b) {
        if (label[b] == count && adjacent(a, b)) {
          label[b] = s;
          queue.push_back(b);
        }
      }
    }
  }
  return label;
}

/// Adjacency matrix of a graph.
inline std::vector<std::vector<bool>> adjacency_matrix(const Graph& g) {
  std::vector<std::vector<bool>> m(g.vertex_count(), std::vector<bool>(g.vertex_count(), false));
  for (const Edge& e : g.edges()) m[e.u][e.v] = m[e.v][e.u] = true;
  return m;
}

}  // namespace pgsw::testing
