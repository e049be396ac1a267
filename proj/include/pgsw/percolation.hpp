#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "pgsw/geometry.hpp"

namespace pgsw {

/// Partition of a point set into r-clusters: components of the graph joining points at
/// distance <= 2r (equivalently, of the union of radius-r balls).
struct ClusterLabeling {
  double r = 0;
  std::vector<PointId> parent;        // union-find forest, fully compressed
  std::vector<std::uint8_t> rank;
  std::vector<PointId> cluster_id;    // canonical id = smallest member id
  std::map<PointId, std::size_t> sizes;
  std::optional<PointId> largest_id;  // max size, ties to the smallest cluster id

  std::size_t point_count() const { return cluster_id.size(); }
  std::size_t cluster_count() const { return sizes.size(); }
  /// Members of a cluster in ascending id order.
  std::vector<PointId> members(PointId cluster) const;
};

struct Cluster {
  PointId id = 0;
  std::vector<PointId> members;
};

ClusterLabeling cluster_points(const IndexedPointSet& index, double r);

/// The largest cluster; throws InvalidInput on an empty labeling.
Cluster largest_cluster(const ClusterLabeling& labeling);

struct ClusterDiameter {
  double value = 0;
  bool exact = true;  // false: double-sweep lower bound (clusters above kExactDiameterMembers)
};

inline constexpr std::size_t kExactDiameterMembers = 2000;

/// Max pairwise distance between member centres, using the index's boundary rule.
ClusterDiameter cluster_diameter(const ClusterLabeling& labeling, PointId cluster,
                                 const IndexedPointSet& index);

/// Same, for an explicit member list.
ClusterDiameter members_diameter(std::span<const PointId> members, const IndexedPointSet& index);

/// True when some cluster has a member within r of each of the 2d faces of [0, n]^d.
bool has_crossing_cluster(const ClusterLabeling& labeling, const IndexedPointSet& index);

struct PercolationEstimate {
  double r = 0;
  std::size_t trials = 0;
  Boundary mode = Boundary::open;
  /// Crossing statistics are only defined in box (open) mode.
  std::optional<double> crossing_fraction;
  std::optional<double> crossing_se;
  double theta_tilde_hat = 0;  // mean |largest cluster| / n^d
  double theta_se = 0;
  double secondary_diameter_max = 0;  // over trials, among non-largest clusters
  bool secondary_diameter_exact = true;
};

/// Monte Carlo in the box B(n). Trial t uses the point set drawn from stream
/// (seed, "perc", t), so estimates at different r share point sets.
PercolationEstimate crossing_probability(double n, int d, double r, std::size_t trials,
                                         std::uint64_t seed);

/// Monte Carlo on the torus T^d_n; theta_tilde_hat estimates the largest-cluster density.
PercolationEstimate estimate_theta_tilde(double n, int d, double r, std::size_t trials,
                                         std::uint64_t seed);

}  // namespace pgsw
