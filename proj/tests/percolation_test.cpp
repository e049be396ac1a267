#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pgsw/errors.hpp"
#include "pgsw/geometry.hpp"
#include "pgsw/percolation.hpp"
#include "test_support.hpp"

namespace pgsw {
namespace {

using testing::bfs_labels;
using testing::uniform_coords;

TEST(Clusters, MatchBreadthFirstComponents) {
  Stream stream(21, "test/clusters");
  for (int t = 0; t < 100; ++t) {
    const std::size_t count = 50 + stream.below(451);
    const int d = 1 + static_cast<int>(stream.below(3));
    const double n = d == 1 ? 200.0 : (d == 2 ? 20.0 : 7.0);
    const Boundary boundary = t % 3 == 0 ? Boundary::open : Boundary::periodic;
    const TorusDomain domain{n, d, boundary};
    const double r = 0.2 + stream.uniform() * 0.6;
    const IndexedPointSet set(domain, uniform_coords(stream, count, d, n), 2 * r);
    const ClusterLabeling labeling = cluster_points(set, r);
    const auto labels = bfs_labels(count, [&](std::size_t a, std::size_t b) {
      return domain_dist(set.point(static_cast<PointId>(a)), set.point(static_cast<PointId>(b)),
                         domain) <= 2 * r;
    });
    for (std::size_t i = 0; i < count; ++i) ASSERT_EQ(labeling.cluster_id[i], labels[i]);
    std::size_t total = 0;
    for (const auto& [id, size] : labeling.sizes) total += size;
    EXPECT_EQ(total, count);
  }
}

TEST(Clusters, ClosedThresholdJoinsPointsAtExactlyTwoR) {
  const TorusDomain domain{10, 1, Boundary::open};
  const IndexedPointSet set(domain, {1.0, 3.0, 5.5}, 1.0);
  const ClusterLabeling labeling = cluster_points(set, 1.0);
  EXPECT_EQ(labeling.cluster_count(), 2u);
  EXPECT_EQ(labeling.cluster_id, (std::vector<PointId>{0, 0, 2}));
  EXPECT_EQ(*labeling.largest_id, 0u);
  EXPECT_EQ(largest_cluster(labeling).members, (std::vector<PointId>{0, 1}));
}

TEST(Clusters, LargestTieGoesToSmallestId) {
  const TorusDomain domain{20, 1, Boundary::open};
  const IndexedPointSet set(domain, {10, 11, 1, 2}, 1.0);
  const ClusterLabeling labeling = cluster_points(set, 0.5);
  EXPECT_EQ(*labeling.largest_id, 0u);
  EXPECT_EQ(labeling.sizes.at(2), 2u);
}

TEST(Clusters, PeriodicWrapJoinsAcrossFace) {
  const std::vector<double> coords{0.2, 9.9};
  const ClusterLabeling torus =
      cluster_points(IndexedPointSet({10, 1, Boundary::periodic}, coords, 1.0), 0.25);
  const ClusterLabeling box =
      cluster_points(IndexedPointSet({10, 1, Boundary::open}, coords, 1.0), 0.25);
  EXPECT_EQ(torus.cluster_count(), 1u);
  EXPECT_EQ(box.cluster_count(), 2u);
}

TEST(Clusters, CoarsenAsRadiusGrows) {
  Stream stream(22, "test/coarsen");
  const TorusDomain domain{15, 2, Boundary::periodic};
  const IndexedPointSet set(domain, uniform_coords(stream, 200, 2, 15), 1.0);
  ClusterLabeling previous = cluster_points(set, 0.1);
  for (double r : {0.3, 0.5, 0.7, 1.0, 2.0}) {
    const ClusterLabeling next = cluster_points(set, r);
    EXPECT_LE(next.cluster_count(), previous.cluster_count());
    for (PointId a = 0; a < set.size(); ++a) {
      EXPECT_EQ(next.cluster_id[a], next.cluster_id[previous.cluster_id[a]]);
    }
    previous = next;
  }
}

TEST(Clusters, EmptySetAndBadRadius) {
  const IndexedPointSet empty({10, 2, Boundary::periodic}, {}, 1.0);
  const ClusterLabeling labeling = cluster_points(empty, 1.0);
  EXPECT_EQ(labeling.cluster_count(), 0u);
  EXPECT_FALSE(labeling.largest_id);
  EXPECT_THROW(largest_cluster(labeling), InvalidInput);
  EXPECT_THROW(cluster_points(empty, 0.0), InvalidInput);
}

TEST(ClusterDiameter, ExamplesAndBruteForce) {
  const IndexedPointSet box({10, 2, Boundary::open}, {0, 0, 3, 4}, 1.0);
  EXPECT_DOUBLE_EQ(members_diameter(std::vector<PointId>{0, 1}, box).value, 5.0);
  const IndexedPointSet torus({10, 2, Boundary::periodic}, {0, 0, 9, 9}, 1.0);
  EXPECT_DOUBLE_EQ(members_diameter(std::vector<PointId>{0, 1}, torus).value, std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(members_diameter(std::vector<PointId>{1}, torus).value, 0.0);

  Stream stream(23, "test/diameter");
  const TorusDomain domain{12, 2, Boundary::periodic};
  const IndexedPointSet set(domain, uniform_coords(stream, 50, 2, 12), 1.0);
  std::vector<PointId> all(50);
  for (PointId i = 0; i < 50; ++i) all[i] = i;
  double brute = 0;
  for (PointId a = 0; a < 50; ++a) {
    for (PointId b = 0; b < 50; ++b) brute = std::max(brute, torus_dist_euclid(set.point(a), set.point(b), domain));
  }
  const ClusterDiameter diam = members_diameter(all, set);
  EXPECT_TRUE(diam.exact);
  EXPECT_DOUBLE_EQ(diam.value, brute);
}

TEST(Crossing, FullStripCrossesAndHalfBoxDoesNot) {
  const TorusDomain domain{4, 2, Boundary::open};
  std::vector<double> grid;
  for (int i = 0; i <= 8; ++i) {
    for (int j = 0; j <= 8; ++j) {
      grid.push_back(std::min(0.5 * i, 3.999));
      grid.push_back(std::min(0.5 * j, 3.999));
    }
  }
  const IndexedPointSet full(domain, grid, 1.0);
  EXPECT_TRUE(has_crossing_cluster(cluster_points(full, 0.3), full));

  std::vector<double> half;
  for (std::size_t k = 0; k < grid.size(); k += 2) {
    if (grid[k] < 1.9) {
      half.push_back(grid[k]);
      half.push_back(grid[k + 1]);
    }
  }
  const IndexedPointSet left(domain, half, 1.0);
  EXPECT_FALSE(has_crossing_cluster(cluster_points(left, 0.3), left));
}

TEST(Crossing, EstimatesAreReproducibleAndBounded) {
  const PercolationEstimate a = crossing_probability(16, 2, 0.6, 20, 5);
  const PercolationEstimate b = crossing_probability(16, 2, 0.6, 20, 5);
  ASSERT_TRUE(a.crossing_fraction);
  EXPECT_EQ(*a.crossing_fraction, *b.crossing_fraction);
  EXPECT_EQ(a.theta_tilde_hat, b.theta_tilde_hat);
  EXPECT_GE(*a.crossing_fraction, 0.0);
  EXPECT_LE(*a.crossing_fraction, 1.0);
  EXPECT_GT(a.theta_tilde_hat, 0.0);
  EXPECT_LE(a.theta_tilde_hat, 2.0);

  const PercolationEstimate torus = estimate_theta_tilde(16, 2, 0.6, 20, 5);
  EXPECT_FALSE(torus.crossing_fraction);
  EXPECT_THROW(crossing_probability(16, 2, 0.6, 0, 5), InvalidInput);
}

TEST(Crossing, DeepSupercriticalAlmostAlwaysCrosses) {
  const PercolationEstimate est = crossing_probability(32, 2, 1.0, 20, 9);
  EXPECT_EQ(*est.crossing_fraction, 1.0);
  const PercolationEstimate sub = crossing_probability(32, 2, 0.25, 20, 9);
  EXPECT_EQ(*sub.crossing_fraction, 0.0);
}

}  // namespace
}  // namespace pgsw
