#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pgsw {

using VertexId = std::uint32_t;

/// S: geometric (<= 2r) edge, L: long edge, B: bridge attaching a minor cluster.
enum class EdgeTag : std::uint8_t { short_edge, long_edge, bridge };

char tag_letter(EdgeTag tag);
std::optional<EdgeTag> tag_from_letter(char c);

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  EdgeTag tag = EdgeTag::short_edge;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected simple graph in CSR form with per-edge tags. Immutable once built.
class Graph {
public:
  Graph() = default;

  /// Throws InvariantViolation on self-loops, duplicate pairs, or out-of-range endpoints.
  static Graph from_edges(std::size_t vertex_count, std::span<const Edge> edges);

  std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return targets_.size() / 2; }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::span<const EdgeTag> neighbor_tags(VertexId v) const {
    return {tags_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t degree(VertexId v, EdgeTag tag) const;
  std::vector<std::size_t> degrees() const;
  /// D = sum of degrees = 2|E|.
  std::size_t total_degree() const { return targets_.size(); }
  bool has_edge(VertexId u, VertexId v) const;

  /// Edges with u < v, sorted by (u, v).
  std::vector<Edge> edges() const;

  /// Component label per vertex (label = smallest vertex of the component).
  std::vector<VertexId> components() const;
  bool connected() const;

  /// Human-readable edge list, used in invariant-failure dumps.
  std::string dump() const;

private:
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> targets_;
  std::vector<EdgeTag> tags_;
};

/// Convenience builders for fixtures and tests.
Graph path_graph(std::size_t k);
Graph cycle_graph(std::size_t k);
Graph star_graph(std::size_t k);
Graph complete_graph(std::size_t k);

}  // namespace pgsw
