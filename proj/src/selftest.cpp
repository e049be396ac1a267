#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "pgsw/chain.hpp"
#include "pgsw/cli.hpp"
#include "pgsw/errors.hpp"
#include "pgsw/experiments.hpp"
#include "pgsw/io.hpp"
#include "pgsw/metrics.hpp"
#include "pgsw/percolation.hpp"
#include "pgsw/smallworld.hpp"

namespace pgsw {

namespace {

struct Check {
  std::string name;
  std::function<bool()> run;
};

bool near(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

Graph single_edge() { return path_graph(2); }

Graph random_graph(Stream& stream, std::size_t k, double p) {
  std::vector<Edge> edges;
  for (VertexId u = 1; u < k; ++u) {
    edges.push_back({static_cast<VertexId>(stream.below(u)), u, EdgeTag::short_edge});
  }
  for (VertexId u = 0; u < k; ++u) {
    for (VertexId v = u + 1; v < k; ++v) {
      const bool tree_edge = std::any_of(edges.begin(), edges.begin() + static_cast<long>(k - 1),
                                         [&](const Edge& e) { return e.u == u && e.v == v; });
      if (!tree_edge && stream.uniform() < p) edges.push_back({u, v, EdgeTag::short_edge});
    }
  }
  return Graph::from_edges(k, edges);
}

std::vector<Check> checks() {
  return {
      {"single edge: pi, T_mix, gap, h, iota",
       [] {
         const Graph g = single_edge();
         const DistVector pi = stationary_distribution(g);
         const ChainReport rep = analyze_chain(g);
         const CutReport cuts = exhaustive_cuts(g);
         return near(pi[0], 0.5) && near(pi[1], 0.5) && rep.t_mix == 1u && near(rep.gap, 1) &&
                near(*cuts.h, 0.5) && near(*cuts.iota, 1);
       }},
      {"triangle: gap 3/4, h 1/2, T_mix 1",
       [] {
         const ChainReport rep = analyze_chain(complete_graph(3));
         return near(rep.gap, 0.75, 1e-9) && near(rep.h, 0.5) && rep.t_mix == 1u;
       }},
      {"prefix box counts match a naive scan",
       [] {
         Stream stream(11, "selftest/boxes");
         const TorusDomain domain{12, 2, Boundary::periodic};
         const IndexedPointSet points = sample_poisson_points(domain, 2.0, stream, 1.0);
         for (int i = 0; i < 200; ++i) {
           const double x[2] = {stream.uniform() * 12, stream.uniform() * 12};
           const BoxRegion box = BoxRegion::centered(x, stream.uniform() * 6, i % 2 == 0);
           std::size_t naive = 0;
           for (PointId id = 0; id < points.size(); ++id) {
             naive += box.contains(points.point(id), domain) ? 1 : 0;
           }
           if (naive != count_in_box(points, box)) return false;
         }
         return true;
       }},
      {"r-clusters match graph components",
       [] {
         for (std::uint64_t t = 0; t < 10; ++t) {
           Stream stream(t, "selftest/clusters");
           const TorusDomain domain{10, 2, Boundary::periodic};
           const IndexedPointSet points = sample_poisson_points(domain, 1.0, stream, 1.0);
           const ClusterLabeling labeling = cluster_points(points, 0.5);
           std::vector<Edge> edges;
           for (PointId a = 0; a < points.size(); ++a) {
             for (PointId b = a + 1; b < points.size(); ++b) {
               if (torus_dist_euclid(points.point(a), points.point(b), domain) <= 1.0) {
                 edges.push_back({a, b, EdgeTag::short_edge});
               }
             }
           }
           const std::vector<VertexId> comp = Graph::from_edges(points.size(), edges).components();
           for (PointId a = 0; a < points.size(); ++a) {
             if (comp[a] != labeling.cluster_id[a]) return false;
           }
         }
         return true;
       }},
      {"Poisson tail below its large-deviation bound",
       [] {
         const TailReport rep = ld_tail_check({TailFamily::poisson, 10, 0, 0}, 2.0, 20000, 5);
         return rep.ok && near(rep.bound, 0.021013, 1e-5) && near(rep.exact, 0.003454, 1e-5);
       }},
      {"Cheeger, mixing and diameter bounds on random graphs",
       [] {
         Stream stream(3, "selftest/graphs");
         for (int i = 0; i < 40; ++i) {
           const Graph g = random_graph(stream, 2 + stream.below(9), 0.3);
           const ChainReport rep = analyze_chain(g);
           if (!check_relations(rep).ok()) return false;
           const CutReport cuts = exhaustive_cuts(g);
           if (!check_diameter_bound(g, *cuts.iota, max_degree(g).value).holds) return false;
         }
         return true;
       }},
      {"long-edge sampler at p = 1 returns every annulus pair",
       [] {
         const ModelConfig model{16, 2, 1.0, 0.1, 0.45, 1.0, 1.0, 9};
         const Instance inst = generate_instance(model);
         LongEdgeParams params = inst.graph.params;
         params.p_n = 1.0;
         return sample_long_edges(inst.graph.base, params, 4) ==
                annulus_pairs(inst.graph.base, params.alpha, params.beta);
       }},
      {"graph file round trip",
       [] {
         const Instance inst = generate_instance(ModelConfig{16, 2, 1.0, 0.1, 0.45, 2.0, 1.5, 3});
         const GraphFile file = to_graph_file(inst.graph);
         return parse_graph(serialize_graph(file)) == file;
       }},
  };
}

}  // namespace

bool run_selftest(std::ostream& out) {
  bool all = true;
  for (const Check& check : checks()) {
    bool ok = false;
    std::string note;
    try {
      ok = check.run();
    } catch (const std::exception& e) {
      note = std::string(" (") + e.what() + ")";
    }
    all = all && ok;
    out << (ok ? "PASS  " : "FAIL  ") << check.name << note << '\n';
  }
  out << (all ? "selftest passed\n" : "selftest FAILED\n");
  return all;
}

}  // namespace pgsw
