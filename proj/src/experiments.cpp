#include "pgsw/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "pgsw/chain.hpp"
#include "pgsw/errors.hpp"
#include "pgsw/format.hpp"
#include "pgsw/metrics.hpp"
#include "pgsw/parallel.hpp"

namespace pgsw {

namespace {

double log_poisson_pmf(double mu, long long j) {
  return -mu + static_cast<double>(j) * std::log(mu) - std::lgamma(static_cast<double>(j) + 1);
}

double log_binomial_pmf(long long n, double p, long long j) {
  const auto nn = static_cast<double>(n), jj = static_cast<double>(j);
  return std::lgamma(nn + 1) - std::lgamma(jj + 1) - std::lgamma(nn - jj + 1) + jj * std::log(p) +
         (nn - jj) * std::log1p(-p);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double require_number(const std::string& text, std::size_t line) {
  const auto value = parse_double(text);
  if (!value || !std::isfinite(*value)) throw ParseError("expected a number, got '" + text + "'", line);
  return *value;
}

std::uint64_t require_count(const std::string& text, std::size_t line) {
  const auto value = parse_u64(text);
  if (!value) throw ParseError("expected a non-negative integer, got '" + text + "'", line);
  return *value;
}

}  // namespace

double gamma_rate(double z) {
  if (!(z > 0) || !std::isfinite(z)) throw InvalidInput("gamma_rate needs z > 0");
  return z * std::log(z) - z + 1;
}

double bernoulli_relative_entropy(double z, double p) {
  return z * std::log(z / p) + (1 - z) * std::log((1 - z) / (1 - p));
}

double binomial_rate(double z, double p) {
  if (!(z > 0 && z < 1 && p > 0 && p < 1)) throw InvalidInput("binomial_rate needs z, p in (0, 1)");
  const double q = 1 - p;
  const double value = z * std::log(z * q / ((1 - z) * p)) - std::log(q / (1 - z));
  const double entropy = bernoulli_relative_entropy(z, p);
  if (std::abs(value - entropy) > 1e-9 * std::max(1.0, std::abs(entropy))) {
    throw InvariantViolation("binomial rate disagrees with the relative entropy form");
  }
  return value;
}

double poisson_upper_tail(double mu, long long k) {
  if (!(mu > 0)) throw InvalidInput("Poisson mean must be positive");
  if (k <= 0) return 1.0;
  // Below the mean the complement is the shorter sum.
  if (static_cast<double>(k) <= mu) {
    double below = 0;
    for (long long j = 0; j < k; ++j) below += std::exp(log_poisson_pmf(mu, j));
    return std::max(0.0, 1.0 - below);
  }
  double sum = 0;
  for (long long j = k;; ++j) {
    const double term = std::exp(log_poisson_pmf(mu, j));
    sum += term;
    if (term < 1e-18 * sum || (term == 0 && static_cast<double>(j) > mu)) break;
  }
  return sum;
}

double binomial_tail(long long n, double p, long long k, bool upper) {
  if (n < 0 || !(p >= 0 && p <= 1)) throw InvalidInput("binomial needs n >= 0 and p in [0, 1]");
  const long long lo = upper ? std::max(k, 0LL) : 0;
  const long long hi = upper ? n : std::min(k, n);
  if (lo > hi) return 0.0;
  if (p == 0 || p == 1) {
    const long long mass_at = p == 0 ? 0 : n;
    return (mass_at >= lo && mass_at <= hi) ? 1.0 : 0.0;
  }
  double sum = 0;
  for (long long j = lo; j <= hi; ++j) sum += std::exp(log_binomial_pmf(n, p, j));
  return std::min(1.0, sum);
}

TailReport ld_tail_check(const TailSpec& spec, double z, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw InvalidInput("tail check needs at least one trial");
  TailReport report;
  report.trials = trials;
  Stream stream(seed, "ld_tail");
  std::size_t hits = 0;
  switch (spec.family) {
    case TailFamily::poisson: {
      if (!(spec.mu > 0)) throw InvalidInput("Poisson mean must be positive");
      if (!(z >= 1)) throw InvalidInput("the Poisson bound covers upper deviations z >= 1");
      report.threshold = static_cast<long long>(std::ceil(z * spec.mu - 1e-9));
      report.bound = std::exp(-gamma_rate(z) * spec.mu);
      report.exact = poisson_upper_tail(spec.mu, report.threshold);
      std::poisson_distribution<long long> dist(spec.mu);
      for (std::size_t t = 0; t < trials; ++t) hits += dist(stream) >= report.threshold ? 1 : 0;
      break;
    }
    case TailFamily::binomial: {
      if (spec.n < 1) throw InvalidInput("binomial needs n >= 1");
      const double nn = static_cast<double>(spec.n);
      const double rate = binomial_rate(z, spec.p);
      report.bound = std::exp(-nn * rate);
      report.upper = z >= spec.p;
      report.threshold = report.upper ? static_cast<long long>(std::ceil(z * nn - 1e-9))
                                      : static_cast<long long>(std::floor(z * nn + 1e-9));
      report.exact = binomial_tail(spec.n, spec.p, report.threshold, report.upper);
      std::binomial_distribution<long long> dist(spec.n, spec.p);
      for (std::size_t t = 0; t < trials; ++t) {
        const long long x = dist(stream);
        hits += (report.upper ? x >= report.threshold : x <= report.threshold) ? 1 : 0;
      }
      break;
    }
    case TailFamily::binomial_small_p: {
      if (spec.n < 1 || !(spec.p > 0 && spec.p < 1)) throw InvalidInput("binomial needs n >= 1, p in (0, 1)");
      if (!(z >= 1)) throw InvalidInput("the small-p bound covers upper deviations z >= 1");
      const double mean = spec.p * static_cast<double>(spec.n);
      report.threshold = static_cast<long long>(std::ceil(z * mean - 1e-9));
      report.bound = std::exp(-gamma_rate(z) * mean);
      report.exact = binomial_tail(spec.n, spec.p, report.threshold, true);
      std::binomial_distribution<long long> dist(spec.n, spec.p);
      for (std::size_t t = 0; t < trials; ++t) hits += dist(stream) >= report.threshold ? 1 : 0;
      break;
    }
  }
  const double count = static_cast<double>(trials);
  report.empirical = static_cast<double>(hits) / count;
  report.se = std::sqrt(report.empirical * (1 - report.empirical) / count);
  report.ok = report.empirical <= report.bound + 4 * report.se && report.exact <= report.bound;
  return report;
}

ConcentrationReport concentration_report(const std::vector<SmallWorldGraph>& ensemble,
                                         double epsilon) {
  if (ensemble.empty()) throw InvalidInput("concentration report needs at least one graph");
  if (!(epsilon > 0)) throw InvalidInput("epsilon must be positive");
  ConcentrationReport report;
  report.trials = ensemble.size();
  report.epsilon = epsilon;
  std::vector<double> density;
  for (const SmallWorldGraph& g : ensemble) {
    density.push_back(static_cast<double>(g.vertex_count()) / g.base.domain().volume());
  }
  for (double x : density) report.theta_hat += x;
  report.theta_hat /= static_cast<double>(ensemble.size());
  std::size_t density_hits = 0, ring_hits = 0;
  report.min_ring_normalized = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const SmallWorldGraph& g = ensemble[i];
    if ((1 - epsilon) * report.theta_hat <= density[i] &&
        density[i] <= (1 + epsilon) * report.theta_hat) {
      ++density_hits;
    }
    const RingReport ring =
        ring_report(g.base, g.params.alpha, g.params.beta, report.theta_hat, epsilon);
    report.gamma_hat = ring.gamma_hat;
    ring_hits += ring.within ? 1 : 0;
    report.min_ring_normalized = std::min(report.min_ring_normalized, ring.min_normalized);
    report.max_ring_normalized = std::max(report.max_ring_normalized, ring.max_normalized);
    const MaxDegree delta = max_degree(g.analysis_graph());
    report.max_degree_ratio = std::max(
        report.max_degree_ratio, degree_log_ratio(delta.value, g.base.domain().n, g.params.chi));
  }
  const double count = static_cast<double>(ensemble.size());
  report.density_fraction = static_cast<double>(density_hits) / count;
  report.ring_fraction = static_cast<double>(ring_hits) / count;
  return report;
}

const std::vector<std::string>& default_scaling_metrics() {
  static const std::vector<std::string> names{"vertices", "long_edges", "delta_gn", "delta_swn",
                                              "diam_gn",  "diam_swn",   "gap",      "bound_4_6"};
  return names;
}

const std::vector<std::string>& all_scaling_metrics() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> all = default_scaling_metrics();
    all.push_back("t_mix");
    return all;
  }();
  return names;
}

void ScalingConfig::validate() const {
  if (d < 1) throw InvalidInput("d must be >= 1");
  if (!(r > 0)) throw InvalidInput("r must be positive");
  if (!(alpha > 0 && alpha < beta && beta < 0.5)) {
    throw InvalidInput("need 0 < alpha < beta < 1/2");
  }
  if (!(sigma > 0)) throw InvalidInput("sigma must be positive");
  if (n_grid.empty()) throw InvalidInput("n_grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (!(n_grid[i] > 1)) throw InvalidInput("every n must exceed 1");
    if (i > 0 && !(n_grid[i] > n_grid[i - 1])) throw InvalidInput("n_grid must be strictly increasing");
  }
  if (trials < 1) throw InvalidInput("trials must be >= 1");
  const auto& known = all_scaling_metrics();
  for (const std::string& m : metrics) {
    if (std::find(known.begin(), known.end(), m) == known.end()) {
      throw InvalidInput("unknown metric '" + m + "'");
    }
  }
}

bool ScalingConfig::wants(const std::string& metric) const {
  const auto& list = metrics.empty() ? default_scaling_metrics() : metrics;
  return std::find(list.begin(), list.end(), metric) != list.end();
}

ScalingConfig parse_scaling_config(const std::string& text) {
  ScalingConfig config;
  std::stringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string content = trim(raw.substr(0, raw.find('#')));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", line);
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key == "d") {
      config.d = static_cast<int>(require_count(value, line));
    } else if (key == "r") {
      config.r = require_number(value, line);
    } else if (key == "alpha") {
      config.alpha = require_number(value, line);
    } else if (key == "beta") {
      config.beta = require_number(value, line);
    } else if (key == "sigma") {
      config.sigma = require_number(value, line);
    } else if (key == "chi") {
      config.chi = require_number(value, line);
    } else if (key == "n_grid") {
      config.n_grid.clear();
      for (const std::string& item : split_list(value)) {
        config.n_grid.push_back(require_number(item, line));
      }
    } else if (key == "trials") {
      config.trials = require_count(value, line);
    } else if (key == "metrics") {
      config.metrics = split_list(value);
    } else if (key == "seed") {
      config.seed = require_count(value, line);
    } else {
      throw ParseError("unknown key '" + key + "'", line);
    }
  }
  try {
    config.validate();
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("invalid config: ") + e.what(), 0);
  }
  return config;
}

std::string format_scaling_config(const ScalingConfig& config) {
  std::ostringstream out;
  out << "d=" << config.d << "\n"
      << "r=" << format_double(config.r) << "\n"
      << "alpha=" << format_double(config.alpha) << "\n"
      << "beta=" << format_double(config.beta) << "\n"
      << "sigma=" << format_double(config.sigma) << "\n"
      << "chi=" << format_double(config.chi) << "\n"
      << "n_grid=";
  for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
    out << (i ? "," : "") << format_double(config.n_grid[i]);
  }
  out << "\ntrials=" << config.trials << "\nmetrics=";
  const auto& list = config.metrics.empty() ? default_scaling_metrics() : config.metrics;
  for (std::size_t i = 0; i < list.size(); ++i) out << (i ? "," : "") << list[i];
  out << "\nseed=" << config.seed << "\n";
  return out.str();
}

RegimeFlags regime_flags(const ScalingConfig& config) {
  RegimeFlags flags;
  flags.chi_above_one = config.chi > 1;
  flags.chi_at_most_lower = config.d > 1 && config.chi <= 1.0 / (1.0 - config.d);
  flags.annulus_factor = annulus_factor(config.alpha, config.beta, config.d);
  flags.annulus_above_half = flags.annulus_factor > 0.5;
  return flags;
}

const ExponentFit& ScalingReport::fit(const std::string& metric) const {
  for (const ExponentFit& f : fits) {
    if (f.metric == metric) return f;
  }
  throw InvalidInput("no fit recorded for metric '" + metric + "'");
}

std::string scaling_budget(const ScalingConfig& config) {
  double points = 0;
  for (double n : config.n_grid) points += std::pow(n, config.d);
  std::ostringstream out;
  out << "scaling sweep: " << config.n_grid.size() * config.trials << " instances ("
      << config.n_grid.size() << " grid values x " << config.trials << " trials), about "
      << static_cast<long long>(points * static_cast<double>(config.trials))
      << " Poisson points in total; largest instance ~"
      << static_cast<long long>(std::pow(config.n_grid.back(), config.d)) << " points";
  return out.str();
}

std::uint64_t scaling_trial_seed(std::uint64_t seed, double n, std::size_t trial) {
  return derive_key(seed, "scale/n=" + format_double(n), trial);
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidInput("median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

ExponentFit fit_exponents(const std::string& metric, const std::vector<double>& n,
                          const std::vector<double>& values) {
  ExponentFit fit;
  fit.metric = metric;
  if (n.size() != values.size()) throw InvalidInput("fit inputs differ in length");
  if (n.size() < 3) {
    fit.reason = "degenerate grid (fewer than 3 points)";
    return fit;
  }
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(values[i] > 0) || !std::isfinite(values[i])) {
      fit.reason = "non-positive value";
      return fit;
    }
    if (!(n[i] > 1)) {
      fit.reason = "n must exceed 1";
      return fit;
    }
  }
  auto ols = [&](auto transform, double& slope, double& residual) {
    const std::size_t k = n.size();
    std::vector<double> x(k), y(k);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < k; ++i) {
      x[i] = transform(n[i]);
      y[i] = std::log(values[i]);
      mx += x[i];
      my += y[i];
    }
    mx /= static_cast<double>(k);
    my /= static_cast<double>(k);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < k; ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
    }
    slope = sxy / sxx;
    residual = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const double e = y[i] - (my + slope * (x[i] - mx));
      residual += e * e;
    }
  };
  ols([](double v) { return std::log(v); }, fit.n_exponent, fit.n_residual);
  ols([](double v) { return std::log(std::log(v)); }, fit.logn_exponent, fit.logn_residual);
  fit.fitted = true;
  return fit;
}

ScalingReport scaling_sweep(const ScalingConfig& config) {
  config.validate();
  ScalingReport report;
  report.config = config;
  report.flags = regime_flags(config);
  const std::size_t units = config.n_grid.size() * config.trials;
  report.rows.resize(units);
  parallel_for(units, [&](std::size_t unit) {
    ScalingRow& row = report.rows[unit];
    row.n = config.n_grid[unit / config.trials];
    row.trial = unit % config.trials;
    row.seed = scaling_trial_seed(config.seed, row.n, row.trial);
    try {
      const ModelConfig model{row.n,  config.d,     config.r,   config.alpha,
                              config.beta, config.sigma, config.chi, row.seed};
      const Instance inst = generate_instance(model);
      const SmallWorldGraph& swn = inst.graph;
      const Graph gn = to_graph(swn.base);
      const Graph full = swn.analysis_graph();
      auto put = [&](const std::string& name, double value) {
        if (config.wants(name)) row.values[name] = value;
      };
      put("vertices", static_cast<double>(swn.vertex_count()));
      put("long_edges", static_cast<double>(swn.long_edges.size()));
      put("delta_gn", static_cast<double>(max_degree(gn).value));
      put("delta_swn", static_cast<double>(max_degree(full).value));
      if (config.wants("diam_gn")) {
        const DiameterResult diam = diameter_auto(gn, derive_key(row.seed, "diam_gn"));
        row.values["diam_gn"] = static_cast<double>(diam.value);
        row.diam_gn_method = to_string(diam.method);
      }
      if (config.wants("diam_swn")) {
        const DiameterResult diam = diameter_auto(full, derive_key(row.seed, "diam_swn"));
        row.values["diam_swn"] = static_cast<double>(diam.value);
        row.diam_swn_method = to_string(diam.method);
      }
      if (config.wants("gap") || config.wants("bound_4_6")) {
        const LazyKernel kernel(full);
        const DistVector pi = stationary_distribution(full);
        const SpectralResult spectral = spectral_gap(kernel);
        const double pi_min = *std::min_element(pi.begin(), pi.end());
        put("gap", spectral.gap);
        put("bound_4_6", std::log(std::exp(1.0) / pi_min) / spectral.gap);
      }
      if (config.wants("t_mix")) {
        const MixingResult mixing = mixing_time_exact(LazyKernel(full), StartSelection{});
        row.values["t_mix"] = static_cast<double>(mixing.t_mix);
      }
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
      row.values.clear();
    }
  });

  const auto& metric_list = config.metrics.empty() ? default_scaling_metrics() : config.metrics;
  for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
    ScalingSummaryRow summary;
    summary.n = config.n_grid[i];
    for (const std::string& metric : metric_list) {
      std::vector<double> values;
      for (std::size_t t = 0; t < config.trials; ++t) {
        const ScalingRow& row = report.rows[i * config.trials + t];
        if (!row.ok) continue;
        const auto it = row.values.find(metric);
        if (it != row.values.end()) values.push_back(it->second);
      }
      if (!values.empty()) summary.medians[metric] = median(values);
    }
    for (std::size_t t = 0; t < config.trials; ++t) {
      summary.ok_trials += report.rows[i * config.trials + t].ok ? 1 : 0;
    }
    report.summary.push_back(std::move(summary));
  }
  for (const std::string& metric : metric_list) {
    std::vector<double> ns, values;
    for (const ScalingSummaryRow& s : report.summary) {
      const auto it = s.medians.find(metric);
      if (it == s.medians.end()) continue;
      ns.push_back(s.n);
      values.push_back(it->second);
    }
    report.fits.push_back(fit_exponents(metric, ns, values));
  }
  return report;
}

}  // namespace pgsw
