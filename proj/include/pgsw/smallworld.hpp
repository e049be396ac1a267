#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "pgsw/geometry.hpp"
#include "pgsw/graph.hpp"
#include "pgsw/percolation.hpp"
#include "pgsw/rng.hpp"

namespace pgsw {

using VertexPair = std::pair<VertexId, VertexId>;

/// G_n: one percolation cluster with its <= 2r edges, re-indexed densely.
struct GeometricGraph {
  double r = 0;
  /// Vertex coordinates indexed by dense vertex id (cell side 2r).
  IndexedPointSet vertices;
  /// Dense vertex id -> id in the originating point set.
  std::vector<PointId> point_ids;
  std::vector<std::vector<VertexId>> adjacency;

  const TorusDomain& domain() const { return vertices.domain(); }
  std::size_t vertex_count() const { return point_ids.size(); }
  std::size_t edge_count() const;
  bool adjacent(VertexId u, VertexId v) const;
};

/// Builds the graph of the largest cluster. Throws InvalidInput for an empty labeling.
GeometricGraph build_geometric_graph(const ClusterLabeling& labeling, const IndexedPointSet& index,
                                     double r);

/// G_n as an analysis graph (all edges tagged S).
Graph to_graph(const GeometricGraph& graph);

/// Same for an explicit member list (ascending point ids).
GeometricGraph build_cluster_graph(std::span<const PointId> members, const IndexedPointSet& index,
                                   double r);

struct LongEdgeProbability {
  double p = 0;
  bool clamped = false;  // sigma n^-d ln^chi n exceeded 1
};

/// p_n = min(1, sigma n^-d ln^chi n). Requires n > 1.
LongEdgeProbability long_edge_probability(double n, int d, double sigma, double chi);

/// (2 beta)^d - (2 alpha)^d: volume fraction of the l-infinity annulus.
double annulus_factor(double alpha, double beta, int d);

struct LongEdgeParams {
  double alpha = 0.1;
  double beta = 0.45;
  double sigma = 1.0;
  double chi = 1.0;
  double p_n = 0;
  bool clamped = false;
  /// Records whether (2 beta)^d - (2 alpha)^d > 1/2.
  bool annulus_hypothesis = false;

  /// Validates 0 < alpha < beta < 1/2 and sigma > 0, then derives p_n for the domain.
  static LongEdgeParams make(double alpha, double beta, double sigma, double chi, double n, int d);
};

/// alpha n <= d_inf^T(x, y) <= beta n.
bool in_annulus(std::span<const double> x, std::span<const double> y, const TorusDomain& domain,
                double alpha, double beta);

/// Fast long-edge sampler. Each vertex scans its annulus with success probability
/// 1 - sqrt(1 - p_n) per candidate, so each pair gets two independent chances and is present
/// with probability exactly p_n. Vertex u draws from stream (seed, "long_edges", u).
/// Returns sorted, deduplicated pairs (u < v).
std::vector<VertexPair> sample_long_edges(const GeometricGraph& graph, const LongEdgeParams& params,
                                          std::uint64_t seed);

inline constexpr std::size_t kBruteForceSamplerLimit = 5000;

/// Reference sampler: one Bernoulli(p_n) per annulus pair, pairs in (u, v) order.
std::vector<VertexPair> sample_long_edges_bruteforce(const GeometricGraph& graph,
                                                     const LongEdgeParams& params, Stream& stream);

/// All annulus pairs (u < v). Quadratic; for oracles and small instances.
std::vector<VertexPair> annulus_pairs(const GeometricGraph& graph, double alpha, double beta);

/// The small world graph: G_n plus long edges.
struct SmallWorldGraph {
  GeometricGraph base;
  std::vector<VertexPair> long_edges;  // sorted, u < v, disjoint from base edges
  LongEdgeParams params;
  std::uint64_t seed = 0;

  std::size_t vertex_count() const { return base.vertex_count(); }
  /// Number of long edges at each vertex.
  std::vector<std::size_t> long_degrees() const;
  Graph analysis_graph() const;
};

/// Merges long edges into G_n: duplicates and pairs already joined by a short edge are
/// dropped, and every remaining long edge is re-checked against the annulus.
SmallWorldGraph assemble_small_world(GeometricGraph graph, std::vector<VertexPair> long_edges,
                                     const LongEdgeParams& params, std::uint64_t seed = 0);

/// The small world graph plus every minor cluster, each joined by its shortest bridge.
struct AugmentedGraph {
  SmallWorldGraph core;
  /// Minor-cluster vertices get dense ids starting at core.vertex_count().
  std::vector<PointId> extra_point_ids;
  std::vector<double> extra_coords;
  std::vector<VertexPair> minor_edges;  // <= 2r edges inside minor clusters
  std::vector<VertexPair> bridges;      // (core vertex, minor vertex)
  std::vector<double> bridge_lengths;

  std::size_t vertex_count() const { return core.vertex_count() + extra_point_ids.size(); }
  std::span<const double> coords(VertexId v) const;
  Graph analysis_graph() const;
};

AugmentedGraph attach_minor_clusters(const ClusterLabeling& labeling, const IndexedPointSet& index,
                                     SmallWorldGraph core);

/// |{v in V_n : alpha n <= d_inf^T(u, v) <= beta n}| by prefix-count box difference.
std::size_t ring_count(const GeometricGraph& graph, VertexId u, double alpha, double beta);

struct RingReport {
  std::size_t min_count = 0;
  std::size_t max_count = 0;
  double min_normalized = 0;  // min_count / n^d
  double max_normalized = 0;
  double gamma_hat = 0;  // annulus_factor * theta_tilde_hat
  bool within = false;   // (1 - eps) gamma_hat <= normalized <= (1 + eps) gamma_hat for all u
};

RingReport ring_report(const GeometricGraph& graph, double alpha, double beta,
                       double theta_tilde_hat, double epsilon);

/// Full model parameters for one generated instance.
struct ModelConfig {
  double n = 64;
  int d = 2;
  double r = 1.0;
  double alpha = 0.1;
  double beta = 0.45;
  double sigma = 2.0;
  double chi = 1.5;
  std::uint64_t seed = 1;
};

struct Instance {
  IndexedPointSet points;
  ClusterLabeling labeling;
  SmallWorldGraph graph;
};

/// Poisson points (stream "points") -> r-clusters -> G_n -> long edges -> small world graph.
Instance generate_instance(const ModelConfig& config);

}  // namespace pgsw
