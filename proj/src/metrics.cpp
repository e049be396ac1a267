#include "pgsw/metrics.hpp"

#include <bit>
#include <cmath>
#include <utility>

#include "pgsw/errors.hpp"
#include "pgsw/parallel.hpp"

namespace pgsw {

namespace {

struct Eccentricity {
  std::size_t value = 0;
  VertexId farthest = 0;
};

Eccentricity eccentricity(const Graph& graph, VertexId source, std::vector<std::size_t>& dist,
                          std::vector<VertexId>& queue) {
  dist.assign(graph.vertex_count(), kUnreachable);
  queue.clear();
  dist[source] = 0;
  queue.push_back(source);
  Eccentricity ecc{0, source};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId u = queue[head];
    const std::size_t du = dist[u];
    if (du > ecc.value || (du == ecc.value && u < ecc.farthest)) ecc = {du, u};
    for (VertexId v : graph.neighbors(u)) {
      if (dist[v] == kUnreachable) {
        dist[v] = du + 1;
        queue.push_back(v);
      }
    }
  }
  return ecc;
}

void require_connected(const Graph& graph) {
  if (graph.vertex_count() == 0) throw InvalidInput("graph has no vertices");
  const std::vector<VertexId> comp = graph.components();
  for (VertexId v = 0; v < comp.size(); ++v) {
    if (comp[v] != comp[0]) {
      throw Disconnected("graph is disconnected: vertices 0 and " + std::to_string(v) +
                         " lie in different components");
    }
  }
}

// True when the sorted member list of mask a precedes that of mask b.
bool lex_less(std::uint32_t a, std::uint32_t b) {
  if (a == b) return false;
  const int k = std::countr_zero(a ^ b);
  if (a & (1u << k)) return (b >> (k + 1)) != 0;
  return (a >> (k + 1)) == 0;
}

std::vector<VertexId> mask_members(std::uint32_t mask) {
  std::vector<VertexId> out;
  for (VertexId v = 0; mask != 0; ++v, mask >>= 1) {
    if (mask & 1u) out.push_back(v);
  }
  return out;
}

}  // namespace

std::vector<std::size_t> bfs_distances(const Graph& graph, VertexId source) {
  if (source >= graph.vertex_count()) throw InvalidInput("source vertex out of range");
  std::vector<std::size_t> dist;
  std::vector<VertexId> queue;
  eccentricity(graph, source, dist, queue);
  return dist;
}

std::string to_string(DiameterMethod method) {
  return method == DiameterMethod::exact ? "exact" : "double_sweep";
}

DiameterResult exact_diameter(const Graph& graph) {
  require_connected(graph);
  const double cost =
      static_cast<double>(graph.vertex_count()) * static_cast<double>(graph.total_degree());
  if (cost > kDiameterBudget) {
    throw GuardExceeded("exact diameter needs ~" + std::to_string(static_cast<long long>(cost)) +
                        " edge traversals (budget 1e9); use diameter_double_sweep instead");
  }
  const std::size_t count = graph.vertex_count();
  std::vector<Eccentricity> ecc(count);
  parallel_for(count, [&](std::size_t s) {
    thread_local std::vector<std::size_t> dist;
    thread_local std::vector<VertexId> queue;
    ecc[s] = eccentricity(graph, static_cast<VertexId>(s), dist, queue);
  });
  DiameterResult out;
  for (VertexId s = 0; s < count; ++s) {
    if (ecc[s].value > out.value) out = {ecc[s].value, s, ecc[s].farthest, DiameterMethod::exact};
  }
  return out;
}

DiameterResult diameter_double_sweep(const Graph& graph, Stream& stream, std::size_t restarts) {
  require_connected(graph);
  if (restarts == 0) throw InvalidInput("double sweep needs at least one restart");
  std::vector<std::size_t> dist;
  std::vector<VertexId> queue;
  DiameterResult out;
  out.method = DiameterMethod::double_sweep;
  for (std::size_t i = 0; i < restarts; ++i) {
    const auto start = static_cast<VertexId>(stream.below(graph.vertex_count()));
    const VertexId a = eccentricity(graph, start, dist, queue).farthest;
    const Eccentricity second = eccentricity(graph, a, dist, queue);
    if (second.value > out.value) {
      out.value = second.value;
      out.u = a;
      out.v = second.farthest;
    }
  }
  return out;
}

DiameterResult diameter_auto(const Graph& graph, std::uint64_t seed, std::size_t restarts) {
  const double cost =
      static_cast<double>(graph.vertex_count()) * static_cast<double>(graph.total_degree());
  if (cost <= kDiameterBudget) return exact_diameter(graph);
  Stream stream(seed, "double_sweep");
  return diameter_double_sweep(graph, stream, restarts);
}

MaxDegree max_degree(const Graph& graph) {
  if (graph.vertex_count() == 0) throw InvalidInput("max degree of an empty graph");
  MaxDegree out{graph.degree(0), 0};
  for (VertexId v = 1; v < graph.vertex_count(); ++v) {
    if (graph.degree(v) > out.value) out = {graph.degree(v), v};
  }
  return out;
}

double degree_log_ratio(std::size_t delta, double n, double chi) {
  if (!(n > 1)) throw InvalidInput("degree ratio needs n > 1");
  return static_cast<double>(delta) / std::pow(std::log(n), chi);
}

std::string to_string(CutMethod method) { return method == CutMethod::exact ? "exact" : "sweep"; }

CutReport exhaustive_cuts(const Graph& graph) {
  const std::size_t count = graph.vertex_count();
  if (count < 2 || count > kExhaustiveCutVertices) {
    throw GuardExceeded("exhaustive cut scan needs 2 <= |V| <= 20 (got " + std::to_string(count) +
                        "); use conductance_sweep for larger graphs");
  }
  if (graph.edge_count() == 0) throw InvalidInput("cut constants need at least one edge");
  std::vector<std::uint32_t> nbr_mask(count, 0);
  std::vector<std::size_t> degree(count);
  for (VertexId v = 0; v < count; ++v) {
    for (VertexId w : graph.neighbors(v)) nbr_mask[v] |= 1u << w;
    degree[v] = graph.degree(v);
  }
  const std::size_t total = graph.total_degree();

  std::uint32_t set = 0;
  std::size_t size = 0, volume = 0, boundary = 0;
  std::uint32_t iota_set = 0, h_set = 0;
  std::size_t iota_num = 0, iota_den = 0, h_num = 0, h_den = 0;
  const std::uint64_t subsets = std::uint64_t{1} << count;
  for (std::uint64_t i = 1; i < subsets; ++i) {
    const int v = std::countr_zero(i);
    const std::uint32_t bit = 1u << v;
    const auto inside = static_cast<std::size_t>(std::popcount(nbr_mask[v] & set));
    if (set & bit) {
      set &= ~bit;
      --size;
      volume -= degree[v];
      boundary = boundary + 2 * inside - degree[v];
    } else {
      set |= bit;
      ++size;
      volume += degree[v];
      boundary = boundary + degree[v] - 2 * inside;
    }
    if (size == 0 || size == count) continue;
    if (2 * size <= count) {
      const bool better = iota_den == 0 || boundary * iota_den < iota_num * size ||
                          (boundary * iota_den == iota_num * size && lex_less(set, iota_set));
      if (better) {
        iota_set = set;
        iota_num = boundary;
        iota_den = size;
      }
    }
    if (volume > 0 && 2 * volume <= total) {
      const bool better = h_den == 0 || boundary * h_den < h_num * volume ||
                          (boundary * h_den == h_num * volume && lex_less(set, h_set));
      if (better) {
        h_set = set;
        h_num = boundary;
        h_den = volume;
      }
    }
  }
  CutReport report;
  report.method = CutMethod::exact;
  report.iota = static_cast<double>(iota_num) / static_cast<double>(iota_den);
  report.iota_witness = mask_members(iota_set);
  report.h = static_cast<double>(h_num) / (2.0 * static_cast<double>(h_den));
  report.h_witness = mask_members(h_set);
  return report;
}

CutReport isoperimetric_exact(const Graph& graph) {
  CutReport report = exhaustive_cuts(graph);
  report.h.reset();
  report.h_witness.clear();
  return report;
}

std::size_t boundary_edges(const Graph& graph, const std::vector<VertexId>& subset) {
  std::vector<bool> in(graph.vertex_count(), false);
  for (VertexId v : subset) {
    if (v >= graph.vertex_count()) throw InvalidInput("subset vertex out of range");
    in[v] = true;
  }
  std::size_t cut = 0;
  for (VertexId v : subset) {
    for (VertexId w : graph.neighbors(v)) cut += in[w] ? 0 : 1;
  }
  return cut;
}

DiameterBoundCheck check_diameter_bound(const Graph& graph, double iota, std::size_t delta) {
  if (!(iota > 0)) throw InvalidInput("iota must be positive; the graph is disconnected");
  if (graph.vertex_count() < 2) throw InvalidInput("diameter bound needs |V| >= 2");
  DiameterBoundCheck check;
  check.lhs = static_cast<double>(exact_diameter(graph).value);
  check.rhs = 4.0 * static_cast<double>(delta) / iota *
              std::log(static_cast<double>(graph.vertex_count()));
  check.holds = check.lhs <= check.rhs;
  return check;
}

}  // namespace pgsw
