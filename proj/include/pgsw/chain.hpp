#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pgsw/graph.hpp"
#include "pgsw/metrics.hpp"

namespace pgsw {

using DistVector = std::vector<double>;

/// Lazy random walk: P(u,u) = 1/2, P(u,v) = 1/(2 deg u) for u ~ v. An isolated vertex
/// (only possible when |V| = 1 for a connected graph) holds with probability 1.
class LazyKernel {
public:
  explicit LazyKernel(const Graph& graph) : graph_(&graph) {}

  const Graph& graph() const { return *graph_; }
  std::size_t size() const { return graph_->vertex_count(); }
  double prob(VertexId u, VertexId v) const;
  /// Sum of row u, accumulated entry by entry.
  double row_sum(VertexId u) const;

  /// One step: out = mu P. `out` is resized as needed and must not alias mu.
  void step(std::span<const double> mu, DistVector& out) const;

private:
  const Graph* graph_;
};

/// pi(u) = deg(u) / D. Throws Disconnected; verifies ||pi P - pi||_1 < 1e-10.
DistVector stationary_distribution(const Graph& graph);

/// || pi P - pi ||_1.
double stationarity_error(const LazyKernel& kernel, std::span<const double> pi);

DistVector evolve_distribution(const LazyKernel& kernel, DistVector mu, std::size_t steps);

/// Half the l1 distance. Throws InvalidInput on a size mismatch.
double tv_distance(std::span<const double> mu, std::span<const double> nu);

inline constexpr std::size_t kAllStartsLimit = 4000;
inline constexpr std::size_t kMixingStepLimit = 1'000'000;

struct StartSelection {
  bool all = true;
  std::size_t sampled = 64;            // used when all == false
  std::vector<VertexId> extra;         // always included (e.g. diameter witnesses)
  std::uint64_t seed = 0;
};

struct MixingResult {
  std::size_t t_mix = 0;
  std::vector<double> tv_curve;  // tv_curve[t] = max over starts of TV(P^t(u,.), pi), t = 0..t_mix
  bool lower_bound = false;      // true when only some starts were evolved
  std::vector<VertexId> starts;
};

/// First t with max over starts of TV(P^t(u,.), pi) < 1/e. Sampled mode uses `sampled`
/// uniform starts plus the min-degree vertex plus `extra`, and flags the result as a lower bound.
MixingResult mixing_time_exact(const LazyKernel& kernel, const StartSelection& starts);

struct SpectralResult {
  double lambda1 = 0;
  double gap = 1;
  std::size_t iterations = 0;
  /// Unit eigenvector of the symmetrized kernel D^{1/2} P D^{-1/2} for lambda1.
  std::vector<double> vector;
};

inline constexpr std::size_t kPowerIterationCap = 100'000;

/// Second eigenvalue of the lazy kernel by power iteration on the symmetrized kernel with the
/// top eigenvector sqrt(deg) projected out every iteration. Stops when successive Rayleigh
/// quotients differ by less than tol and the geometric tail of the remaining differences is
/// also below tol. Throws Disconnected, or GuardExceeded (with the last estimate) at the cap.
SpectralResult spectral_gap(const LazyKernel& kernel, double tol = 1e-10,
                            std::size_t max_iterations = kPowerIterationCap);

/// Exact conductance h with witness (|V| <= 20). Checks that E(S,S^c)/(2 vol S) and
/// Q(S,S^c)/pi(S) agree within 1e-12.
CutReport conductance_exact(const Graph& graph);

/// Upper bound on h: the best prefix cut of the vertices ordered by D^{-1/2} times the
/// symmetrized eigenvector (ties by vertex id).
CutReport conductance_sweep(const Graph& graph, std::span<const double> eigenvector);

struct ChainReport {
  std::optional<std::size_t> t_mix;
  bool t_mix_lower_bound = false;
  std::vector<double> tv_curve;
  double lambda1 = 0;
  double gap = 0;
  double pi_min = 0;
  double h = 0;
  CutMethod h_method = CutMethod::exact;
  double bound_4_6 = 0;  // ln(e / pi_min) / gap
  double cheeger_lhs = 0;  // h^2 / 2
  double cheeger_rhs = 0;  // 2 h
};

struct ChainOptions {
  bool compute_t_mix = true;
  StartSelection starts;
  double tol = 1e-10;
};

/// Stationary distribution, spectral gap, conductance (exact for |V| <= 20, sweep otherwise),
/// the mixing bound and, if requested, T_mix.
ChainReport analyze_chain(const Graph& graph, const ChainOptions& options = {});

inline constexpr double kRelationSlack = 1e-9;

struct RelationVerdict {
  std::optional<bool> cheeger_lower;  // h^2/2 <= gap (exact h only)
  bool cheeger_upper = false;         // gap <= 2h
  std::optional<bool> mixing_bound;   // t_mix <= ln(e/pi_min)/gap (when t_mix is known)
  double cheeger_lower_slack = 0;
  double cheeger_upper_slack = 0;
  double mixing_slack = 0;

  bool ok() const {
    return cheeger_lower.value_or(true) && cheeger_upper && mixing_bound.value_or(true);
  }
};

/// Evaluates h^2/2 <= gap <= 2h and T_mix <= ln(e/pi_min)/gap with 1e-9 slack. With a sweep h
/// (an upper bound on the true h) only gap <= 2h is checkable. A sampled-start T_mix is a
/// lower bound on the true value, so its check remains valid.
RelationVerdict check_relations(const ChainReport& report);

/// check_relations, throwing InvariantViolation with the report and the graph's edge list on
/// any violated relation.
RelationVerdict require_relations(const ChainReport& report, const Graph& graph);

}  // namespace pgsw
