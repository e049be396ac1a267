#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pgsw/smallworld.hpp"

namespace pgsw {

/// gamma(z) = z ln z - z + 1, z > 0.
double gamma_rate(double z);

/// I(z; p) = z ln(zq / ((1 - z) p)) - ln(q / (1 - z)), q = 1 - p; z, p in (0, 1).
double binomial_rate(double z, double p);

/// z ln(z/p) + (1 - z) ln((1 - z)/q): the relative-entropy form of binomial_rate.
double bernoulli_relative_entropy(double z, double p);

/// P(Z >= k) for Z ~ Poisson(mu), summed in log space.
double poisson_upper_tail(double mu, long long k);

/// P(Z >= k) (upper) or P(Z <= k) (lower) for Z ~ Binomial(n, p).
double binomial_tail(long long n, double p, long long k, bool upper);

enum class TailFamily {
  poisson,          // P(Z >= z mu) <= exp(-gamma(z) mu), z >= 1
  binomial,         // z > p: P(Z >= z n) <= exp(-n I(z)); z < p: P(Z <= z n) <= exp(-n I(z))
  binomial_small_p  // P(Z >= z p n) <= exp(-gamma(z) p n), z >= 1
};

struct TailSpec {
  TailFamily family = TailFamily::poisson;
  double mu = 10;   // poisson mean
  long long n = 100;  // binomial trials
  double p = 0.5;     // binomial success probability
};

struct TailReport {
  double bound = 0;
  double empirical = 0;
  double se = 0;
  double exact = 0;  // exact tail probability of the same event
  long long threshold = 0;  // integer cut-off of the tail event
  bool upper = true;
  std::size_t trials = 0;
  bool ok = false;  // empirical <= bound + 4 se and exact <= bound
};

/// Monte Carlo tail frequency against the analytic large-deviation bound. Throws InvalidInput
/// for a deviation direction the bound does not cover.
TailReport ld_tail_check(const TailSpec& spec, double z, std::size_t trials, std::uint64_t seed);

struct ConcentrationReport {
  std::size_t trials = 0;
  double epsilon = 0;
  double theta_hat = 0;  // pooled mean of |V_n| / n^d
  double gamma_hat = 0;  // annulus factor * theta_hat
  double density_fraction = 0;  // trials with (1 +- eps) theta_hat containing |V_n| / n^d
  double ring_fraction = 0;     // trials with every normalized ring count within (1 +- eps) gamma_hat
  double min_ring_normalized = 0;
  double max_ring_normalized = 0;
  double max_degree_ratio = 0;  // max over trials of Delta / ln^chi n
};

/// Concentration events over an ensemble generated at fixed parameters.
ConcentrationReport concentration_report(const std::vector<SmallWorldGraph>& ensemble,
                                         double epsilon);

struct ScalingConfig {
  int d = 2;
  double r = 1.0;
  double alpha = 0.1;
  double beta = 0.45;
  double sigma = 2.0;
  double chi = 1.5;
  std::vector<double> n_grid{64, 128, 256, 512};
  std::size_t trials = 10;
  std::vector<std::string> metrics;  // empty: every default metric
  std::uint64_t seed = 1;

  /// Throws InvalidInput on a non-increasing grid, unknown metric, or bad parameter.
  void validate() const;
  bool wants(const std::string& metric) const;
};

/// Metric names recorded by default, in column order.
const std::vector<std::string>& default_scaling_metrics();
/// Every recognized metric (defaults plus exact T_mix, which is opt-in).
const std::vector<std::string>& all_scaling_metrics();

/// Flat key=value text (# comments). Keys mirror ScalingConfig; lists are comma-separated.
ScalingConfig parse_scaling_config(const std::string& text);
std::string format_scaling_config(const ScalingConfig& config);

/// Hypothesis flags recorded with every sweep.
struct RegimeFlags {
  bool chi_above_one = false;            // chi > 1
  bool chi_at_most_lower = false;        // chi <= 1 / (1 - d)
  double annulus_factor = 0;             // (2 beta)^d - (2 alpha)^d
  bool annulus_above_half = false;
};

RegimeFlags regime_flags(const ScalingConfig& config);

struct ScalingRow {
  double n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  std::map<std::string, double> values;
  std::string diam_gn_method;
  std::string diam_swn_method;
};

struct ExponentFit {
  std::string metric;
  bool fitted = false;
  std::string reason;  // why not fitted
  double n_exponent = 0;       // slope of ln(metric) vs ln n
  double n_residual = 0;       // residual sum of squares
  double logn_exponent = 0;    // slope of ln(metric) vs ln ln n
  double logn_residual = 0;
};

struct ScalingSummaryRow {
  double n = 0;
  std::size_t ok_trials = 0;
  std::map<std::string, double> medians;
};

struct ScalingReport {
  ScalingConfig config;
  RegimeFlags flags;
  std::vector<ScalingRow> rows;
  std::vector<ScalingSummaryRow> summary;
  std::vector<ExponentFit> fits;

  const ExponentFit& fit(const std::string& metric) const;
};

/// Rough cost statement printed before a sweep starts.
std::string scaling_budget(const ScalingConfig& config);

/// Seed for trial t at grid value n.
std::uint64_t scaling_trial_seed(std::uint64_t seed, double n, std::size_t trial);

/// Runs every (n, trial), records metric rows (failed trials are kept with their error), and
/// fits exponents on per-n medians.
ScalingReport scaling_sweep(const ScalingConfig& config);

/// Least-squares fits of ln(value) against ln n and ln ln n. Refuses (fitted = false) grids
/// shorter than 3 or non-positive values.
ExponentFit fit_exponents(const std::string& metric, const std::vector<double>& n,
                          const std::vector<double>& values);

double median(std::vector<double> values);

}  // namespace pgsw
