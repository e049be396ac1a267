#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pgsw/graph.hpp"
#include "pgsw/rng.hpp"

namespace pgsw {

/// Distance marker for vertices not reachable from the source.
inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

/// Hop distances from source; unreachable vertices get kUnreachable.
std::vector<std::size_t> bfs_distances(const Graph& graph, VertexId source);

enum class DiameterMethod { exact, double_sweep };

std::string to_string(DiameterMethod method);

struct DiameterResult {
  std::size_t value = 0;
  VertexId u = 0;  // witness pair at distance `value`
  VertexId v = 0;
  DiameterMethod method = DiameterMethod::exact;
};

/// Edge traversals allowed for an all-sources BFS (|V| * 2|E|).
inline constexpr double kDiameterBudget = 1e9;

/// Exact diameter by BFS from every vertex. Throws Disconnected (naming two components) or
/// GuardExceeded when |V| * 2|E| exceeds kDiameterBudget.
DiameterResult exact_diameter(const Graph& graph);

/// Lower bound: for each restart, BFS from a random vertex, then BFS from the farthest vertex
/// found. Exact on trees. Throws Disconnected.
DiameterResult diameter_double_sweep(const Graph& graph, Stream& stream, std::size_t restarts);

/// Exact when within the budget, otherwise a double sweep with `restarts` restarts.
DiameterResult diameter_auto(const Graph& graph, std::uint64_t seed, std::size_t restarts = 4);

struct MaxDegree {
  std::size_t value = 0;
  VertexId argmax = 0;  // smallest vertex attaining the maximum
};

/// Throws InvalidInput on an empty graph.
MaxDegree max_degree(const Graph& graph);

/// Delta / ln^chi n: the constant M that a bound Delta <= M ln^chi n would need.
double degree_log_ratio(std::size_t delta, double n, double chi);

enum class CutMethod { exact, sweep };

std::string to_string(CutMethod method);

/// Cut constants with witnesses. Witness sets are sorted vertex lists.
struct CutReport {
  CutMethod method = CutMethod::exact;
  std::optional<double> iota;  // min over |S| <= |V|/2 of E(S, S^c) / |S|
  std::vector<VertexId> iota_witness;
  std::optional<double> h;  // min over 2 vol(S) <= D of E(S, S^c) / (2 vol(S))
  std::vector<VertexId> h_witness;
};

/// Largest graph the exhaustive subset scans accept.
inline constexpr std::size_t kExhaustiveCutVertices = 20;

/// Exact iota and h by a Gray-code scan over all vertex subsets. Ties go to the
/// lexicographically smallest witness. Requires 2 <= |V| <= 20 and at least one edge.
CutReport exhaustive_cuts(const Graph& graph);

/// Exact iota only (same scan).
CutReport isoperimetric_exact(const Graph& graph);

/// Boundary edge count E(S, S^c) for a vertex subset.
std::size_t boundary_edges(const Graph& graph, const std::vector<VertexId>& subset);

struct DiameterBoundCheck {
  double lhs = 0;  // diam(G)
  double rhs = 0;  // 4 Delta / iota * ln |V|
  bool holds = false;
};

/// Evaluates diam(G) <= 4 Delta / iota ln|V| with the exact diameter.
DiameterBoundCheck check_diameter_bound(const Graph& graph, double iota, std::size_t delta);

}  // namespace pgsw
