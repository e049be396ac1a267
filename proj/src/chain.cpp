#include "pgsw/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pgsw/errors.hpp"
#include "pgsw/parallel.hpp"
#include "pgsw/rng.hpp"

namespace pgsw {

namespace {

void require_connected(const Graph& graph) {
  if (graph.vertex_count() == 0) throw InvalidInput("graph has no vertices");
  if (!graph.connected()) {
    throw Disconnected("the lazy walk needs a connected graph (stationary law is not unique)");
  }
}

double self_loop(const Graph& graph, VertexId u) { return graph.degree(u) == 0 ? 1.0 : 0.5; }

std::vector<double> tv_trajectory(const LazyKernel& kernel, const DistVector& pi, VertexId start,
                                  std::size_t max_steps, bool stop_below) {
  const double threshold = std::exp(-1.0);
  DistVector mu(kernel.size(), 0.0), next;
  mu[start] = 1.0;
  std::vector<double> curve{tv_distance(mu, pi)};
  for (;;) {
    if (stop_below ? curve.back() < threshold : curve.size() > max_steps) break;
    if (curve.size() > kMixingStepLimit) {
      throw GuardExceeded("mixing time exceeds " + std::to_string(kMixingStepLimit) + " steps");
    }
    kernel.step(mu, next);
    std::swap(mu, next);
    curve.push_back(tv_distance(mu, pi));
  }
  return curve;
}

}  // namespace

double LazyKernel::prob(VertexId u, VertexId v) const {
  if (u == v) return self_loop(*graph_, u);
  return graph_->has_edge(u, v) ? 1.0 / (2.0 * static_cast<double>(graph_->degree(u))) : 0.0;
}

double LazyKernel::row_sum(VertexId u) const {
  double sum = self_loop(*graph_, u);
  for (VertexId v : graph_->neighbors(u)) sum += prob(u, v);
  return sum;
}

void LazyKernel::step(std::span<const double> mu, DistVector& out) const {
  const Graph& g = *graph_;
  out.assign(g.vertex_count(), 0.0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    double acc = mu[v] * self_loop(g, v);
    for (VertexId u : g.neighbors(v)) acc += mu[u] / (2.0 * static_cast<double>(g.degree(u)));
    out[v] = acc;
  }
}

double stationarity_error(const LazyKernel& kernel, std::span<const double> pi) {
  DistVector next;
  kernel.step(pi, next);
  double err = 0;
  for (std::size_t v = 0; v < next.size(); ++v) err += std::abs(next[v] - pi[v]);
  return err;
}

DistVector stationary_distribution(const Graph& graph) {
  require_connected(graph);
  const std::size_t count = graph.vertex_count();
  if (count == 1) return {1.0};
  const auto total = static_cast<double>(graph.total_degree());
  DistVector pi(count);
  for (VertexId v = 0; v < count; ++v) pi[v] = static_cast<double>(graph.degree(v)) / total;
  const double err = stationarity_error(LazyKernel(graph), pi);
  if (!(err < 1e-10)) {
    throw InvariantViolation("||pi P - pi||_1 = " + std::to_string(err) + " exceeds 1e-10");
  }
  return pi;
}

DistVector evolve_distribution(const LazyKernel& kernel, DistVector mu, std::size_t steps) {
  if (mu.size() != kernel.size()) throw InvalidInput("distribution size does not match the graph");
  DistVector next;
  for (std::size_t t = 0; t < steps; ++t) {
    kernel.step(mu, next);
    std::swap(mu, next);
  }
  return mu;
}

double tv_distance(std::span<const double> mu, std::span<const double> nu) {
  if (mu.size() != nu.size()) {
    throw InvalidInput("tv_distance: sizes differ (" + std::to_string(mu.size()) + " vs " +
                       std::to_string(nu.size()) + ")");
  }
  double sum = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) sum += std::abs(mu[i] - nu[i]);
  return 0.5 * sum;
}

MixingResult mixing_time_exact(const LazyKernel& kernel, const StartSelection& selection) {
  const Graph& graph = kernel.graph();
  const DistVector pi = stationary_distribution(graph);
  const std::size_t count = graph.vertex_count();
  MixingResult result;
  if (selection.all) {
    if (count > kAllStartsLimit) {
      throw GuardExceeded("mixing time over all starts is limited to |V| <= " +
                          std::to_string(kAllStartsLimit) + "; use sampled starts");
    }
    result.starts.resize(count);
    std::iota(result.starts.begin(), result.starts.end(), VertexId{0});
  } else {
    Stream stream(selection.seed, "mix_starts");
    for (std::size_t i = 0; i < selection.sampled; ++i) {
      result.starts.push_back(static_cast<VertexId>(stream.below(count)));
    }
    VertexId min_deg = 0;
    for (VertexId v = 1; v < count; ++v) {
      if (graph.degree(v) < graph.degree(min_deg)) min_deg = v;
    }
    result.starts.push_back(min_deg);
    for (VertexId v : selection.extra) {
      if (v >= count) throw InvalidInput("start vertex out of range");
      result.starts.push_back(v);
    }
    std::sort(result.starts.begin(), result.starts.end());
    result.starts.erase(std::unique(result.starts.begin(), result.starts.end()),
                        result.starts.end());
  }
  result.lower_bound = result.starts.size() < count;

  const std::size_t k = result.starts.size();
  std::vector<std::vector<double>> curves(k);
  parallel_for(k, [&](std::size_t i) {
    curves[i] = tv_trajectory(kernel, pi, result.starts[i], kMixingStepLimit, true);
  });
  std::size_t t_mix = 0;
  for (const auto& c : curves) t_mix = std::max(t_mix, c.size() - 1);
  parallel_for(k, [&](std::size_t i) {
    if (curves[i].size() - 1 < t_mix) {
      curves[i] = tv_trajectory(kernel, pi, result.starts[i], t_mix, false);
    }
  });
  result.t_mix = t_mix;
  result.tv_curve.assign(t_mix + 1, 0.0);
  for (const auto& c : curves) {
    for (std::size_t t = 0; t <= t_mix; ++t) result.tv_curve[t] = std::max(result.tv_curve[t], c[t]);
  }
  return result;
}

SpectralResult spectral_gap(const LazyKernel& kernel, double tol, std::size_t max_iterations) {
  const Graph& graph = kernel.graph();
  require_connected(graph);
  const std::size_t count = graph.vertex_count();
  if (count < 2) throw InvalidInput("spectral gap needs at least two vertices");
  const auto total = static_cast<double>(graph.total_degree());
  std::vector<double> w(count), phi(count);
  for (VertexId v = 0; v < count; ++v) {
    const auto deg = static_cast<double>(graph.degree(v));
    w[v] = 1.0 / std::sqrt(deg);
    phi[v] = std::sqrt(deg / total);
  }
  auto deflate_normalize = [&](std::vector<double>& x) {
    const double along = std::inner_product(x.begin(), x.end(), phi.begin(), 0.0);
    for (std::size_t v = 0; v < count; ++v) x[v] -= along * phi[v];
    const double norm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
    if (norm > 0) {
      for (double& value : x) value /= norm;
    }
    return norm;
  };

  std::vector<double> x(count), y(count), z(count);
  Stream stream(0, "power_iteration");
  for (double& value : x) value = stream.uniform() - 0.5;
  deflate_normalize(x);

  SpectralResult result;
  double q_prev = 0, diff_prev = 0;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    for (std::size_t v = 0; v < count; ++v) z[v] = w[v] * x[v];
    for (VertexId u = 0; u < count; ++u) {
      double acc = 0;
      for (VertexId v : graph.neighbors(u)) acc += z[v];
      y[u] = 0.5 * x[u] + 0.5 * w[u] * acc;
    }
    const double q = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
    result.iterations = it;
    result.lambda1 = q;
    const double diff = std::abs(q - q_prev);
    bool done = false;
    if (it > 1 && diff < tol) {
      const double ratio = diff_prev > 0 ? diff / diff_prev : 0.0;
      done = diff == 0 || (ratio < 1 && diff * ratio / (1 - ratio) < tol);
    }
    if (done) break;
    const double norm = deflate_normalize(y);
    if (norm < 1e-300) break;  // x spans an invariant subspace with eigenvalue q
    std::swap(x, y);
    q_prev = q;
    diff_prev = diff;
    if (it == max_iterations) {
      throw GuardExceeded("power iteration did not converge in " + std::to_string(max_iterations) +
                          " iterations; last lambda1 estimate " + std::to_string(q));
    }
  }
  result.lambda1 = std::clamp(result.lambda1, 0.0, 1.0);
  result.gap = 1.0 - result.lambda1;
  result.vector = std::move(x);
  return result;
}

CutReport conductance_exact(const Graph& graph) {
  CutReport report = exhaustive_cuts(graph);
  const auto total = static_cast<double>(graph.total_degree());
  std::vector<bool> in(graph.vertex_count(), false);
  for (VertexId v : report.h_witness) in[v] = true;
  double flow = 0, mass = 0;
  for (VertexId u : report.h_witness) {
    const double pi_u = static_cast<double>(graph.degree(u)) / total;
    mass += pi_u;
    for (VertexId v : graph.neighbors(u)) {
      if (!in[v]) flow += pi_u / (2.0 * static_cast<double>(graph.degree(u)));
    }
  }
  if (std::abs(flow / mass - *report.h) > 1e-12) {
    throw InvariantViolation("conductance formulations disagree: Q/pi = " +
                             std::to_string(flow / mass) + ", E/(2 vol) = " +
                             std::to_string(*report.h));
  }
  return report;
}

CutReport conductance_sweep(const Graph& graph, std::span<const double> eigenvector) {
  const std::size_t count = graph.vertex_count();
  if (eigenvector.size() != count) throw InvalidInput("eigenvector size does not match the graph");
  require_connected(graph);
  if (count < 2) throw InvalidInput("conductance needs at least two vertices");
  std::vector<double> f(count);
  for (VertexId v = 0; v < count; ++v) {
    f[v] = eigenvector[v] / std::sqrt(static_cast<double>(graph.degree(v)));
  }
  std::vector<VertexId> order(count);
  std::iota(order.begin(), order.end(), VertexId{0});
  std::sort(order.begin(), order.end(),
            [&](VertexId a, VertexId b) { return f[a] < f[b] || (f[a] == f[b] && a < b); });

  const std::size_t total = graph.total_degree();
  std::vector<bool> in(count, false);
  std::size_t boundary = 0, volume = 0;
  std::size_t best_k = 0, best_num = 0, best_den = 0;
  bool best_prefix = true;
  for (std::size_t k = 1; k < count; ++k) {
    const VertexId v = order[k - 1];
    std::size_t inside = 0;
    for (VertexId u : graph.neighbors(v)) inside += in[u] ? 1 : 0;
    in[v] = true;
    boundary = boundary + graph.degree(v) - 2 * inside;
    volume += graph.degree(v);
    const bool prefix = 2 * volume <= total;
    const std::size_t side = prefix ? volume : total - volume;
    if (side == 0) continue;
    if (best_den == 0 || boundary * best_den < best_num * side) {
      best_k = k;
      best_num = boundary;
      best_den = side;
      best_prefix = prefix;
    }
  }
  CutReport report;
  report.method = CutMethod::sweep;
  report.h = static_cast<double>(best_num) / (2.0 * static_cast<double>(best_den));
  if (best_prefix) {
    report.h_witness.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_k));
  } else {
    report.h_witness.assign(order.begin() + static_cast<std::ptrdiff_t>(best_k), order.end());
  }
  std::sort(report.h_witness.begin(), report.h_witness.end());
  return report;
}

ChainReport analyze_chain(const Graph& graph, const ChainOptions& options) {
  if (graph.vertex_count() < 2) throw InvalidInput("chain analysis needs at least two vertices");
  const DistVector pi = stationary_distribution(graph);
  const LazyKernel kernel(graph);
  ChainReport report;
  report.pi_min = *std::min_element(pi.begin(), pi.end());
  const SpectralResult spectral = spectral_gap(kernel, options.tol);
  report.lambda1 = spectral.lambda1;
  report.gap = spectral.gap;
  const CutReport cuts = graph.vertex_count() <= kExhaustiveCutVertices
                             ? conductance_exact(graph)
                             : conductance_sweep(graph, spectral.vector);
  report.h = *cuts.h;
  report.h_method = cuts.method;
  report.bound_4_6 = std::log(std::exp(1.0) / report.pi_min) / report.gap;
  report.cheeger_lhs = report.h * report.h / 2;
  report.cheeger_rhs = 2 * report.h;
  if (options.compute_t_mix) {
    MixingResult mixing = mixing_time_exact(kernel, options.starts);
    report.t_mix = mixing.t_mix;
    report.t_mix_lower_bound = mixing.lower_bound;
    report.tv_curve = std::move(mixing.tv_curve);
  }
  return report;
}

RelationVerdict check_relations(const ChainReport& report) {
  RelationVerdict verdict;
  verdict.cheeger_upper_slack = report.cheeger_rhs - report.gap;
  verdict.cheeger_upper = verdict.cheeger_upper_slack >= -kRelationSlack;
  if (report.h_method == CutMethod::exact) {
    verdict.cheeger_lower_slack = report.gap - report.cheeger_lhs;
    verdict.cheeger_lower = verdict.cheeger_lower_slack >= -kRelationSlack;
  }
  if (report.t_mix) {
    verdict.mixing_slack = report.bound_4_6 - static_cast<double>(*report.t_mix);
    verdict.mixing_bound = verdict.mixing_slack >= -kRelationSlack;
  }
  return verdict;
}

RelationVerdict require_relations(const ChainReport& report, const Graph& graph) {
  const RelationVerdict verdict = check_relations(report);
  if (!verdict.ok()) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "chain relation violated: h=" << report.h << " (" << to_string(report.h_method)
        << ") gap=" << report.gap << " pi_min=" << report.pi_min;
    if (report.t_mix) msg << " t_mix=" << *report.t_mix;
    msg << " bound=" << report.bound_4_6 << "\n" << graph.dump();
    throw InvariantViolation(msg.str());
  }
  return verdict;
}

}  // namespace pgsw
