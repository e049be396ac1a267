#include "pgsw/graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "pgsw/errors.hpp"

namespace pgsw {

char tag_letter(EdgeTag tag) {
  switch (tag) {
    case EdgeTag::short_edge: return 'S';
    case EdgeTag::long_edge: return 'L';
    case EdgeTag::bridge: return 'B';
  }
  return '?';
}

std::optional<EdgeTag> tag_from_letter(char c) {
  switch (c) {
    case 'S': return EdgeTag::short_edge;
    case 'L': return EdgeTag::long_edge;
    case 'B': return EdgeTag::bridge;
    default: return std::nullopt;
  }
}

Graph Graph::from_edges(std::size_t vertex_count, std::span<const Edge> edges) {
  std::vector<Edge> sorted;
  sorted.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u >= vertex_count || e.v >= vertex_count) {
      throw InvariantViolation("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                               ") references a vertex outside 0.." +
                               std::to_string(vertex_count));
    }
    if (e.u == e.v) throw InvariantViolation("self-loop at vertex " + std::to_string(e.u));
    sorted.push_back(e.u < e.v ? e : Edge{e.v, e.u, e.tag});
  }
  std::sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].u == sorted[i - 1].u && sorted[i].v == sorted[i - 1].v) {
      throw InvariantViolation("duplicate edge (" + std::to_string(sorted[i].u) + ", " +
                               std::to_string(sorted[i].v) + ")");
    }
  }

  Graph g;
  g.offsets_.assign(vertex_count + 1, 0);
  for (const Edge& e : sorted) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.targets_.resize(2 * sorted.size());
  g.tags_.resize(2 * sorted.size());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  // Sorted (u, v) order fills every list in ascending neighbour order:
  // entries v' < u arrive first (as the larger endpoint), then v > u.
  for (const Edge& e : sorted) {
    g.targets_[fill[e.v]] = e.u;
    g.tags_[fill[e.v]++] = e.tag;
  }
  for (const Edge& e : sorted) {
    g.targets_[fill[e.u]] = e.v;
    g.tags_[fill[e.u]++] = e.tag;
  }
  return g;
}

std::size_t Graph::degree(VertexId v, EdgeTag tag) const {
  const auto tags = neighbor_tags(v);
  return static_cast<std::size_t>(std::count(tags.begin(), tags.end(), tag));
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> out(vertex_count());
  for (VertexId v = 0; v < out.size(); ++v) out[v] = degree(v);
  return out;
}

bool Graph::has_edge(VertexId u, VertexId v) const {
  const auto nbrs = neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (VertexId u = 0; u < vertex_count(); ++u) {
    const auto nbrs = neighbors(u);
    const auto tags = neighbor_tags(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (u < nbrs[i]) out.push_back({u, nbrs[i], tags[i]});
    }
  }
  return out;
}

std::vector<VertexId> Graph::components() const {
  const std::size_t n = vertex_count();
  constexpr VertexId unset = ~VertexId{0};
  std::vector<VertexId> label(n, unset);
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < n; ++s) {
    if (label[s] != unset) continue;
    label[s] = s;
    stack.push_back(s);
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (VertexId w : neighbors(v)) {
        if (label[w] == unset) {
          label[w] = s;
          stack.push_back(w);
        }
      }
    }
  }
  return label;
}

bool Graph::connected() const {
  const auto label = components();
  return std::all_of(label.begin(), label.end(), [](VertexId l) { return l == 0; });
}

std::string Graph::dump() const {
  std::ostringstream out;
  out << "|V|=" << vertex_count() << " |E|=" << edge_count() << '\n';
  for (const Edge& e : edges()) out << e.u << ' ' << e.v << ' ' << tag_letter(e.tag) << '\n';
  return out.str();
}

Graph path_graph(std::size_t k) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i + 1)});
  }
  return Graph::from_edges(k, edges);
}

Graph cycle_graph(std::size_t k) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < k; ++i) {
    edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % k)});
  }
  return Graph::from_edges(k, edges);
}

Graph star_graph(std::size_t k) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < k; ++i) edges.push_back({0, static_cast<VertexId>(i)});
  return Graph::from_edges(k, edges);
}

Graph complete_graph(std::size_t k) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j)});
    }
  }
  return Graph::from_edges(k, edges);
}

}  // namespace pgsw
