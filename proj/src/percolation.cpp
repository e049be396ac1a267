#include "pgsw/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pgsw/errors.hpp"
#include "pgsw/parallel.hpp"

namespace pgsw {

namespace {

PointId find_root(std::vector<PointId>& parent, PointId x) {
  PointId root = x;
  while (parent[root] != root) root = parent[root];
  while (parent[x] != root) {
    const PointId next = parent[x];
    parent[x] = root;
    x = next;
  }
  return root;
}

void unite(std::vector<PointId>& parent, std::vector<std::uint8_t>& rank, PointId a, PointId b) {
  a = find_root(parent, a);
  b = find_root(parent, b);
  if (a == b) return;
  if (rank[a] < rank[b]) std::swap(a, b);
  parent[b] = a;
  if (rank[a] == rank[b]) ++rank[a];
}

struct TrialOutcome {
  bool crossing = false;
  double density = 0;
  double secondary_diameter = 0;
  bool secondary_exact = true;
};

TrialOutcome run_trial(const TorusDomain& domain, double r, std::uint64_t seed, std::size_t trial) {
  Stream stream(seed, "perc", trial);
  const IndexedPointSet points = sample_poisson_points(domain, 1.0, stream, 2 * r);
  TrialOutcome out;
  if (points.empty()) return out;
  const ClusterLabeling labeling = cluster_points(points, r);
  const PointId largest = *labeling.largest_id;
  out.density = static_cast<double>(labeling.sizes.at(largest)) / domain.volume();
  if (!domain.periodic()) out.crossing = has_crossing_cluster(labeling, points);
  std::map<PointId, std::vector<PointId>> groups;
  for (PointId i = 0; i < labeling.point_count(); ++i) {
    const PointId id = labeling.cluster_id[i];
    if (id != largest && labeling.sizes.at(id) > 1) groups[id].push_back(i);
  }
  for (const auto& [id, members] : groups) {
    const ClusterDiameter diam = members_diameter(members, points);
    if (diam.value > out.secondary_diameter) {
      out.secondary_diameter = diam.value;
      out.secondary_exact = diam.exact;
    }
  }
  return out;
}

PercolationEstimate run_estimate(const TorusDomain& domain, double r, std::size_t trials,
                                 std::uint64_t seed) {
  if (trials < 1) throw InvalidInput("trials must be >= 1");
  if (!(r > 0)) throw InvalidInput("radius r must be positive");
  std::vector<TrialOutcome> outcomes(trials);
  parallel_for(trials, [&](std::size_t t) { outcomes[t] = run_trial(domain, r, seed, t); });

  PercolationEstimate est;
  est.r = r;
  est.trials = trials;
  est.mode = domain.boundary;
  const double count = static_cast<double>(trials);
  double crossings = 0, sum = 0, sum_sq = 0;
  for (const TrialOutcome& o : outcomes) {
    crossings += o.crossing ? 1.0 : 0.0;
    sum += o.density;
    sum_sq += o.density * o.density;
    if (o.secondary_diameter > est.secondary_diameter_max) {
      est.secondary_diameter_max = o.secondary_diameter;
      est.secondary_diameter_exact = o.secondary_exact;
    }
  }
  est.theta_tilde_hat = sum / count;
  if (trials > 1) {
    const double var = std::max(0.0, (sum_sq - sum * sum / count) / (count - 1));
    est.theta_se = std::sqrt(var / count);
  }
  if (!domain.periodic()) {
    const double f = crossings / count;
    est.crossing_fraction = f;
    est.crossing_se = std::sqrt(f * (1 - f) / count);
  }
  return est;
}

}  // namespace

std::vector<PointId> ClusterLabeling::members(PointId cluster) const {
  std::vector<PointId> out;
  for (PointId i = 0; i < cluster_id.size(); ++i) {
    if (cluster_id[i] == cluster) out.push_back(i);
  }
  return out;
}

ClusterLabeling cluster_points(const IndexedPointSet& index, double r) {
  if (!(r > 0) || !std::isfinite(r)) throw InvalidInput("radius r must be positive");
  ClusterLabeling labeling;
  labeling.r = r;
  const std::size_t count = index.size();
  labeling.parent.resize(count);
  std::iota(labeling.parent.begin(), labeling.parent.end(), PointId{0});
  labeling.rank.assign(count, 0);

  std::vector<PointId> nbrs;
  for (PointId i = 0; i < count; ++i) {
    nbrs.clear();
    index.for_each_within(index.point(i), 2 * r, [&](PointId j, double) {
      if (j > i) nbrs.push_back(j);
    });
    std::sort(nbrs.begin(), nbrs.end());
    for (PointId j : nbrs) unite(labeling.parent, labeling.rank, i, j);
  }

  // Canonical cluster id: the smallest member id.
  labeling.cluster_id.assign(count, 0);
  std::vector<PointId> canonical(count, static_cast<PointId>(count));
  for (PointId i = 0; i < count; ++i) {
    const PointId root = find_root(labeling.parent, i);
    if (canonical[root] == count) canonical[root] = i;
    labeling.cluster_id[i] = canonical[root];
    ++labeling.sizes[canonical[root]];
  }
  for (const auto& [id, size] : labeling.sizes) {
    if (!labeling.largest_id || size > labeling.sizes.at(*labeling.largest_id)) {
      labeling.largest_id = id;
    }
  }
  return labeling;
}

Cluster largest_cluster(const ClusterLabeling& labeling) {
  if (!labeling.largest_id) throw InvalidInput("no cluster: the point set is empty");
  return {*labeling.largest_id, labeling.members(*labeling.largest_id)};
}

ClusterDiameter cluster_diameter(const ClusterLabeling& labeling, PointId cluster,
                                 const IndexedPointSet& index) {
  const std::vector<PointId> members = labeling.members(cluster);
  if (members.empty()) throw InvalidInput("cluster " + std::to_string(cluster) + " is empty");
  return members_diameter(members, index);
}

ClusterDiameter members_diameter(std::span<const PointId> members, const IndexedPointSet& index) {
  if (members.empty()) throw InvalidInput("diameter of an empty point set");
  const TorusDomain& domain = index.domain();
  ClusterDiameter out;
  if (members.size() <= kExactDiameterMembers) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        out.value = std::max(out.value,
                             domain_dist(index.point(members[a]), index.point(members[b]), domain));
      }
    }
    return out;
  }
  // Geometric double sweep: farthest member from the first, then farthest from that one.
  out.exact = false;
  auto farthest = [&](PointId from) {
    PointId best = from;
    double best_dist = 0;
    for (PointId m : members) {
      const double dist = domain_dist(index.point(from), index.point(m), domain);
      if (dist > best_dist) {
        best = m;
        best_dist = dist;
      }
    }
    return std::pair{best, best_dist};
  };
  const PointId far = farthest(members.front()).first;
  out.value = farthest(far).second;
  return out;
}

bool has_crossing_cluster(const ClusterLabeling& labeling, const IndexedPointSet& index) {
  const TorusDomain& domain = index.domain();
  const int d = domain.d;
  const unsigned all = (1u << (2 * d)) - 1;
  std::map<PointId, unsigned> faces;
  for (PointId i = 0; i < labeling.point_count(); ++i) {
    const auto x = index.point(i);
    unsigned mask = 0;
    for (int s = 0; s < d; ++s) {
      if (x[s] <= labeling.r) mask |= 1u << (2 * s);
      if (x[s] >= domain.n - labeling.r) mask |= 1u << (2 * s + 1);
    }
    if (mask == 0) continue;
    unsigned& acc = faces[labeling.cluster_id[i]];
    acc |= mask;
    if (acc == all) return true;
  }
  return false;
}

PercolationEstimate crossing_probability(double n, int d, double r, std::size_t trials,
                                         std::uint64_t seed) {
  return run_estimate(TorusDomain{n, d, Boundary::open}, r, trials, seed);
}

PercolationEstimate estimate_theta_tilde(double n, int d, double r, std::size_t trials,
                                         std::uint64_t seed) {
  return run_estimate(TorusDomain{n, d, Boundary::periodic}, r, trials, seed);
}

}  // namespace pgsw
