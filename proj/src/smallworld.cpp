#include "pgsw/smallworld.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <unordered_set>

#include "pgsw/errors.hpp"
#include "pgsw/parallel.hpp"

namespace pgsw {

namespace {

// Cells of the vertex grid around x, split by their relation to the annulus
// inner <= d_inf(x, .) <= outer. Interior cells lie entirely inside it; boundary cells
// straddle a face and need a per-point membership test. Cells entirely inside the
// inner box are left out.
struct AnnulusCells {
  std::vector<CellBox> interior;
  std::vector<CellBox> boundary;
};

AnnulusCells annulus_cells(const IndexedPointSet& index, std::span<const double> x, double inner,
                           double outer) {
  const std::size_t d = x.size();
  const double c = index.cell_side();
  const long m = index.cells_per_axis();
  const double eps = 1e-9 * c;
  auto clip = [](CellRange r, const CellRange& to) {
    return CellRange{std::max(r.lo, to.lo), std::min(r.hi, to.hi)};
  };
  CellBox touched(d), contained(d), near_inner(d), inside_inner(d);
  bool has_contained = true;
  for (std::size_t s = 0; s < d; ++s) {
    CellRange o{static_cast<long>(std::floor((x[s] - outer) / c)),
                static_cast<long>(std::floor((x[s] + outer) / c))};
    // outer < n/2, so at most the two end cells alias the same physical cell.
    if (o.length() > m) o.hi = o.lo + m - 1;
    touched[s] = o;
    contained[s] = clip({static_cast<long>(std::ceil((x[s] - outer + eps) / c)),
                         static_cast<long>(std::floor((x[s] + outer - eps) / c)) - 1},
                        o);
    near_inner[s] = clip({static_cast<long>(std::floor((x[s] - inner - eps) / c)),
                          static_cast<long>(std::floor((x[s] + inner + eps) / c))},
                         o);
    inside_inner[s] = clip({static_cast<long>(std::ceil((x[s] - inner + eps) / c)),
                            static_cast<long>(std::floor((x[s] + inner - eps) / c)) - 1},
                           o);
    has_contained = has_contained && !contained[s].empty();
  }
  AnnulusCells out;
  if (!has_contained) {
    out.boundary.push_back(touched);
    return out;
  }
  out.interior = subtract_cell_box(contained, near_inner);
  out.boundary = subtract_cell_box(touched, contained);
  CellBox overlap(d);
  bool has_overlap = true;
  for (std::size_t s = 0; s < d; ++s) {
    overlap[s] = clip(contained[s], near_inner[s]);
    has_overlap = has_overlap && !overlap[s].empty();
  }
  if (has_overlap) {
    for (CellBox& piece : subtract_cell_box(overlap, inside_inner)) {
      out.boundary.push_back(std::move(piece));
    }
  }
  return out;
}

// k distinct uniform values from [0, count), Floyd's algorithm.
std::vector<std::size_t> distinct_ranks(std::size_t count, std::size_t k, Stream& stream) {
  std::vector<std::size_t> picked;
  picked.reserve(k);
  std::unordered_set<std::size_t> seen;
  const bool use_set = k > 32;
  auto contains = [&](std::size_t v) {
    return use_set ? seen.count(v) > 0 : std::find(picked.begin(), picked.end(), v) != picked.end();
  };
  for (std::size_t j = count - k; j < count; ++j) {
    const std::size_t t = stream.below(j + 1);
    const std::size_t v = contains(t) ? j : t;
    picked.push_back(v);
    if (use_set) seen.insert(v);
  }
  return picked;
}

void normalize_pairs(std::vector<VertexPair>& pairs) {
  for (auto& [u, v] : pairs) {
    if (u > v) std::swap(u, v);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

}  // namespace

std::size_t GeometricGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nbrs : adjacency) twice += nbrs.size();
  return twice / 2;
}

bool GeometricGraph::adjacent(VertexId u, VertexId v) const {
  const auto& nbrs = adjacency[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

GeometricGraph build_cluster_graph(std::span<const PointId> members, const IndexedPointSet& index,
                                   double r) {
  if (members.empty()) throw InvalidInput("cannot build a graph from an empty cluster");
  if (!(r > 0)) throw InvalidInput("radius r must be positive");
  const std::size_t d = static_cast<std::size_t>(index.dim());
  std::vector<double> coords;
  coords.reserve(members.size() * d);
  for (PointId id : members) {
    const auto p = index.point(id);
    coords.insert(coords.end(), p.begin(), p.end());
  }
  GeometricGraph g{r, IndexedPointSet(index.domain(), std::move(coords), 2 * r),
                   {members.begin(), members.end()}, {}};
  g.adjacency.resize(members.size());
  for (VertexId u = 0; u < members.size(); ++u) {
    auto& nbrs = g.adjacency[u];
    g.vertices.for_each_within(g.vertices.point(u), 2 * r, [&](PointId v, double) {
      if (v != u) nbrs.push_back(v);
    });
    std::sort(nbrs.begin(), nbrs.end());
  }
  return g;
}

GeometricGraph build_geometric_graph(const ClusterLabeling& labeling, const IndexedPointSet& index,
                                     double r) {
  const Cluster largest = largest_cluster(labeling);
  GeometricGraph g = build_cluster_graph(largest.members, index, r);
  if (!to_graph(g).connected()) {
    throw InvariantViolation("largest cluster graph is not connected");
  }
  return g;
}

LongEdgeProbability long_edge_probability(double n, int d, double sigma, double chi) {
  if (!(n > 1)) throw InvalidInput("long-edge probability needs n > 1 (ln n > 0)");
  if (!(sigma > 0)) throw InvalidInput("sigma must be positive");
  const double p = sigma * std::pow(n, -d) * std::pow(std::log(n), chi);
  if (p > 1) return {1.0, true};
  return {p, false};
}

double annulus_factor(double alpha, double beta, int d) {
  return std::pow(2 * beta, d) - std::pow(2 * alpha, d);
}

LongEdgeParams LongEdgeParams::make(double alpha, double beta, double sigma, double chi, double n,
                                    int d) {
  if (!(alpha > 0 && alpha < beta && beta < 0.5)) {
    throw InvalidInput("long-edge parameters need 0 < alpha < beta < 1/2");
  }
  const LongEdgeProbability prob = long_edge_probability(n, d, sigma, chi);
  LongEdgeParams params;
  params.alpha = alpha;
  params.beta = beta;
  params.sigma = sigma;
  params.chi = chi;
  params.p_n = prob.p;
  params.clamped = prob.clamped;
  params.annulus_hypothesis = annulus_factor(alpha, beta, d) > 0.5;
  return params;
}

bool in_annulus(std::span<const double> x, std::span<const double> y, const TorusDomain& domain,
                double alpha, double beta) {
  const double dist = torus_dist_linf(x, y, domain);
  return alpha * domain.n <= dist && dist <= beta * domain.n;
}

std::vector<VertexPair> sample_long_edges(const GeometricGraph& graph, const LongEdgeParams& params,
                                          std::uint64_t seed) {
  if (!(params.p_n >= 0 && params.p_n <= 1)) throw InvalidInput("p_n must lie in [0, 1]");
  if (params.p_n == 0 || graph.vertex_count() < 2) return {};
  const double per_scan = 1 - std::sqrt(1 - params.p_n);
  const IndexedPointSet& index = graph.vertices;
  const TorusDomain& domain = index.domain();
  const double inner = params.alpha * domain.n;
  const double outer = params.beta * domain.n;

  std::vector<std::vector<VertexPair>> found(graph.vertex_count());
  parallel_for(graph.vertex_count(), [&](std::size_t unit) {
    const auto u = static_cast<VertexId>(unit);
    Stream stream(seed, "long_edges", u);
    const auto x = index.point(u);
    auto& out = found[u];
    auto take = [&](PointId v, bool check) {
      if (v == u || (check && !in_annulus(x, index.point(v), domain, params.alpha, params.beta))) {
        return;
      }
      out.emplace_back(std::min<VertexId>(u, v), std::max<VertexId>(u, v));
    };
    auto scan = [&](const CellBox& box, bool check) {
      const std::size_t count = index.count_cells(box);
      if (count == 0) return;
      std::binomial_distribution<long long> successes_dist(static_cast<long long>(count), per_scan);
      const auto successes = static_cast<std::size_t>(successes_dist(stream));
      if (successes == 0) return;
      if (successes == count) {
        index.for_each_in_cells(box, [&](PointId v) { take(v, check); });
        return;
      }
      for (std::size_t rank : distinct_ranks(count, successes, stream)) {
        take(index.select_in_cells(box, rank), check);
      }
    };
    const AnnulusCells cells = annulus_cells(index, x, inner, outer);
    for (const CellBox& box : cells.interior) scan(box, false);
    for (const CellBox& box : cells.boundary) scan(box, true);
  });

  std::vector<VertexPair> pairs;
  for (auto& part : found) pairs.insert(pairs.end(), part.begin(), part.end());
  normalize_pairs(pairs);
  return pairs;
}

std::vector<VertexPair> sample_long_edges_bruteforce(const GeometricGraph& graph,
                                                     const LongEdgeParams& params, Stream& stream) {
  if (graph.vertex_count() > kBruteForceSamplerLimit) {
    throw GuardExceeded("brute-force sampler is limited to " +
                        std::to_string(kBruteForceSamplerLimit) + " vertices");
  }
  std::vector<VertexPair> pairs;
  const IndexedPointSet& index = graph.vertices;
  for (VertexId u = 0; u < graph.vertex_count(); ++u) {
    for (VertexId v = u + 1; v < graph.vertex_count(); ++v) {
      if (!in_annulus(index.point(u), index.point(v), index.domain(), params.alpha, params.beta)) {
        continue;
      }
      if (stream.uniform() < params.p_n) pairs.emplace_back(u, v);
    }
  }
  return pairs;
}

std::vector<VertexPair> annulus_pairs(const GeometricGraph& graph, double alpha, double beta) {
  std::vector<VertexPair> pairs;
  const IndexedPointSet& index = graph.vertices;
  for (VertexId u = 0; u < graph.vertex_count(); ++u) {
    for (VertexId v = u + 1; v < graph.vertex_count(); ++v) {
      if (in_annulus(index.point(u), index.point(v), index.domain(), alpha, beta)) {
        pairs.emplace_back(u, v);
      }
    }
  }
  return pairs;
}

std::vector<std::size_t> SmallWorldGraph::long_degrees() const {
  std::vector<std::size_t> deg(vertex_count(), 0);
  for (const auto& [u, v] : long_edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

namespace {

std::vector<Edge> short_edges(const GeometricGraph& graph) {
  std::vector<Edge> edges;
  for (VertexId u = 0; u < graph.vertex_count(); ++u) {
    for (VertexId v : graph.adjacency[u]) {
      if (u < v) edges.push_back({u, v, EdgeTag::short_edge});
    }
  }
  return edges;
}

}  // namespace

Graph to_graph(const GeometricGraph& graph) {
  return Graph::from_edges(graph.vertex_count(), short_edges(graph));
}

Graph SmallWorldGraph::analysis_graph() const {
  std::vector<Edge> edges = short_edges(base);
  for (const auto& [u, v] : long_edges) edges.push_back({u, v, EdgeTag::long_edge});
  return Graph::from_edges(vertex_count(), edges);
}

SmallWorldGraph assemble_small_world(GeometricGraph graph, std::vector<VertexPair> long_edges,
                                     const LongEdgeParams& params, std::uint64_t seed) {
  const std::size_t n = graph.vertex_count();
  for (const auto& [u, v] : long_edges) {
    if (u >= n || v >= n) {
      throw InvalidInput("long edge (" + std::to_string(u) + ", " + std::to_string(v) +
                         ") references a missing vertex");
    }
  }
  normalize_pairs(long_edges);
  std::erase_if(long_edges, [&](const VertexPair& e) {
    return e.first == e.second || graph.adjacent(e.first, e.second);
  });
  const IndexedPointSet& index = graph.vertices;
  for (const auto& [u, v] : long_edges) {
    if (!in_annulus(index.point(u), index.point(v), index.domain(), params.alpha, params.beta)) {
      throw InvariantViolation("long edge (" + std::to_string(u) + ", " + std::to_string(v) +
                               ") fails the annulus test");
    }
  }
  return SmallWorldGraph{std::move(graph), std::move(long_edges), params, seed};
}

std::span<const double> AugmentedGraph::coords(VertexId v) const {
  const std::size_t core_count = core.vertex_count();
  if (v < core_count) return core.base.vertices.point(v);
  const auto d = static_cast<std::size_t>(core.base.domain().d);
  return {extra_coords.data() + (v - core_count) * d, d};
}

Graph AugmentedGraph::analysis_graph() const {
  std::vector<Edge> edges = core.analysis_graph().edges();
  for (const auto& [u, v] : minor_edges) edges.push_back({u, v, EdgeTag::short_edge});
  for (const auto& [u, v] : bridges) edges.push_back({u, v, EdgeTag::bridge});
  return Graph::from_edges(vertex_count(), edges);
}

AugmentedGraph attach_minor_clusters(const ClusterLabeling& labeling, const IndexedPointSet& index,
                                     SmallWorldGraph core) {
  if (!labeling.largest_id || labeling.sizes.at(*labeling.largest_id) != core.vertex_count()) {
    throw InvalidInput("core graph was not built from this labeling");
  }
  const PointId largest = *labeling.largest_id;
  const double r = core.base.r;
  AugmentedGraph aug{std::move(core), {}, {}, {}, {}, {}};

  std::map<PointId, std::vector<PointId>> minor;
  for (PointId i = 0; i < labeling.point_count(); ++i) {
    if (labeling.cluster_id[i] != largest) minor[labeling.cluster_id[i]].push_back(i);
  }
  std::vector<VertexId> dense(index.size(), 0);
  VertexId next = static_cast<VertexId>(aug.core.vertex_count());
  for (const auto& [id, members] : minor) {
    for (PointId p : members) {
      dense[p] = next++;
      aug.extra_point_ids.push_back(p);
      const auto x = index.point(p);
      aug.extra_coords.insert(aug.extra_coords.end(), x.begin(), x.end());
    }
  }
  const IndexedPointSet& core_index = aug.core.base.vertices;
  for (const auto& [id, members] : minor) {
    for (PointId p : members) {
      index.for_each_within(index.point(p), 2 * r, [&](PointId q, double) {
        if (q > p) aug.minor_edges.emplace_back(dense[p], dense[q]);
      });
    }
    // Shortest bridge; ties go to the smallest (minor point, core vertex) pair.
    PointId best_member = members.front();
    VertexId best_target = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (PointId p : members) {
      const auto [target, dist] = core_index.nearest(index.point(p));
      if (dist < best_dist) {
        best_member = p;
        best_target = target;
        best_dist = dist;
      }
    }
    aug.bridges.emplace_back(best_target, dense[best_member]);
    aug.bridge_lengths.push_back(best_dist);
  }
  std::sort(aug.minor_edges.begin(), aug.minor_edges.end());
  return aug;
}

std::size_t ring_count(const GeometricGraph& graph, VertexId u, double alpha, double beta) {
  const IndexedPointSet& index = graph.vertices;
  const TorusDomain& domain = index.domain();
  if (u >= graph.vertex_count()) throw InvalidInput("vertex out of range");
  if (!(alpha >= 0) || !(beta >= alpha)) throw InvalidInput("ring needs 0 <= alpha <= beta");
  if (alpha * domain.n >= domain.n / 2) {
    throw InvalidInput("alpha n >= n/2: annulus is not defined on the torus");
  }
  const auto x = index.point(u);
  const std::size_t outer = beta * domain.n >= domain.n / 2
                                ? index.size()
                                : count_in_box(index, BoxRegion::centered(x, beta * domain.n, true));
  const std::size_t inner = count_in_box(index, BoxRegion::centered(x, alpha * domain.n, false));
  return outer - inner;
}

RingReport ring_report(const GeometricGraph& graph, double alpha, double beta,
                       double theta_tilde_hat, double epsilon) {
  RingReport report;
  const TorusDomain& domain = graph.domain();
  const std::size_t count = graph.vertex_count();
  std::vector<std::size_t> rings(count);
  parallel_for(count, [&](std::size_t u) {
    rings[u] = ring_count(graph, static_cast<VertexId>(u), alpha, beta);
  });
  const auto [lo, hi] = std::minmax_element(rings.begin(), rings.end());
  report.min_count = *lo;
  report.max_count = *hi;
  const double volume = domain.volume();
  report.min_normalized = static_cast<double>(report.min_count) / volume;
  report.max_normalized = static_cast<double>(report.max_count) / volume;
  report.gamma_hat = annulus_factor(alpha, beta, domain.d) * theta_tilde_hat;
  report.within = (1 - epsilon) * report.gamma_hat <= report.min_normalized &&
                  report.max_normalized <= (1 + epsilon) * report.gamma_hat;
  return report;
}

Instance generate_instance(const ModelConfig& config) {
  const TorusDomain domain{config.n, config.d, Boundary::periodic};
  Stream point_stream(config.seed, "points");
  IndexedPointSet points = sample_poisson_points(domain, 1.0, point_stream, 2 * config.r);
  ClusterLabeling labeling = cluster_points(points, config.r);
  GeometricGraph base = build_geometric_graph(labeling, points, config.r);
  const LongEdgeParams params =
      LongEdgeParams::make(config.alpha, config.beta, config.sigma, config.chi, config.n, config.d);
  std::vector<VertexPair> long_edges = sample_long_edges(base, params, config.seed);
  SmallWorldGraph graph =
      assemble_small_world(std::move(base), std::move(long_edges), params, config.seed);
  return Instance{std::move(points), std::move(labeling), std::move(graph)};
}

}  // namespace pgsw
