#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "pgsw/errors.hpp"
#include "pgsw/experiments.hpp"
#include "pgsw/parallel.hpp"

namespace pgsw {
namespace {

/// P(Po(mu) >= k) as 1 minus the lower sum, pmf by recurrence.
double poisson_tail_oracle(double mu, long long k) {
  double pmf = std::exp(-mu);
  double below = 0;
  for (long long j = 0; j < k; ++j) {
    below += pmf;
    pmf *= mu / static_cast<double>(j + 1);
  }
  return 1 - below;
}

double binomial_pmf(long long n, double p, long long j) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) +
                  j * std::log(p) + (n - j) * std::log1p(-p));
}

TEST(RateFunctions, GammaExamples) {
  EXPECT_NEAR(gamma_rate(1), 0, 1e-15);
  EXPECT_NEAR(gamma_rate(2), 0.386294, 1e-6);
  EXPECT_NEAR(gamma_rate(std::exp(1.0)), 1, 1e-12);
  EXPECT_NEAR(gamma_rate(0.5), 0.5 * std::log(0.5) + 0.5, 1e-15);
  EXPECT_THROW(gamma_rate(0), InvalidInput);
}

TEST(RateFunctions, BinomialExamplesAndIdentity) {
  EXPECT_NEAR(binomial_rate(0.75, 0.5), 0.130812, 1e-6);
  EXPECT_NEAR(binomial_rate(0.5, 0.5), 0, 1e-15);
  for (double z : {0.05, 0.2, 0.6, 0.93}) {
    for (double p : {0.01, 0.3, 0.5, 0.8}) {
      EXPECT_NEAR(binomial_rate(z, p), binomial_rate(1 - z, 1 - p), 1e-12);
      EXPECT_NEAR(binomial_rate(z, p), bernoulli_relative_entropy(z, p), 1e-12);
      EXPECT_GE(binomial_rate(z, p), 0);
    }
  }
  EXPECT_THROW(binomial_rate(1.0, 0.5), InvalidInput);
}

TEST(ExactTails, MatchIndependentSums) {
  EXPECT_NEAR(poisson_upper_tail(10, 20), 0.00345, 1e-5);
  for (double mu : {0.5, 3.0, 10.0, 40.0}) {
    for (long long k : {0LL, 1LL, 5LL, 20LL, 60LL}) {
      EXPECT_NEAR(poisson_upper_tail(mu, k), poisson_tail_oracle(mu, k), 1e-12) << mu << " " << k;
    }
  }
  for (long long k : {0LL, 30LL, 50LL, 75LL, 100LL}) {
    double upper = 0;
    double lower = 0;
    for (long long j = 0; j <= 100; ++j) (j >= k ? upper : lower) += binomial_pmf(100, 0.5, j);
    lower += binomial_pmf(100, 0.5, k);
    EXPECT_NEAR(binomial_tail(100, 0.5, k, true), upper, 1e-12);
    EXPECT_NEAR(binomial_tail(100, 0.5, k, false), lower, 1e-12);
  }
}

TEST(TailChecks, PoissonBelowBound) {
  const TailReport report = ld_tail_check({TailFamily::poisson, 10, 0, 0}, 2.0, 50000, 1);
  EXPECT_TRUE(report.ok);
  EXPECT_EQ(report.threshold, 20);
  EXPECT_NEAR(report.bound, 0.02101, 1e-5);
  EXPECT_NEAR(report.exact, 0.00345, 1e-5);
  EXPECT_NEAR(report.empirical, report.exact, 5 * std::sqrt(report.exact / 50000));
  EXPECT_THROW(ld_tail_check({TailFamily::poisson, 10, 0, 0}, 0.5, 10, 1), InvalidInput);
}

TEST(TailChecks, BinomialBothDirections) {
  const TailReport up = ld_tail_check({TailFamily::binomial, 0, 100, 0.5}, 0.75, 20000, 2);
  EXPECT_TRUE(up.ok);
  EXPECT_TRUE(up.upper);
  EXPECT_NEAR(std::log(up.bound), -13.0812, 1e-3);
  const TailReport down = ld_tail_check({TailFamily::binomial, 0, 100, 0.5}, 0.4, 20000, 2);
  EXPECT_TRUE(down.ok);
  EXPECT_FALSE(down.upper);
  EXPECT_EQ(down.threshold, 40);
  const TailReport small = ld_tail_check({TailFamily::binomial_small_p, 0, 1000, 0.01}, 2.0, 20000, 3);
  EXPECT_TRUE(small.ok);
  EXPECT_EQ(small.threshold, 20);
}

TEST(TailChecks, Reproducible) {
  const TailSpec spec{TailFamily::poisson, 5, 0, 0};
  EXPECT_EQ(ld_tail_check(spec, 1.5, 1000, 9).empirical, ld_tail_check(spec, 1.5, 1000, 9).empirical);
}

TEST(Concentration, ReportIsInternallyConsistent) {
  std::vector<SmallWorldGraph> ensemble;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    ensemble.push_back(generate_instance({32, 2, 1.0, 0.1, 0.45, 2.0, 1.0, seed}).graph);
  }
  const ConcentrationReport report = concentration_report(ensemble, 0.1);
  EXPECT_EQ(report.trials, 6u);
  EXPECT_GE(report.density_fraction, 0);
  EXPECT_LE(report.density_fraction, 1);
  EXPECT_GE(report.ring_fraction, 0);
  EXPECT_LE(report.ring_fraction, 1);
  EXPECT_LE(report.min_ring_normalized, report.max_ring_normalized);
  EXPECT_NEAR(report.gamma_hat, 0.77 * report.theta_hat, 1e-12);
  EXPECT_GT(report.max_degree_ratio, 0);
  EXPECT_THROW(concentration_report({}, 0.1), InvalidInput);
}

TEST(ExponentFits, RecoverSyntheticExponents) {
  const std::vector<double> grid{64, 128, 256, 512};
  std::vector<double> log_sq;
  std::vector<double> linear;
  for (double n : grid) {
    log_sq.push_back(3 * std::pow(std::log(n), 2));
    linear.push_back(0.5 * n);
  }
  const ExponentFit a = fit_exponents("a", grid, log_sq);
  ASSERT_TRUE(a.fitted);
  EXPECT_NEAR(a.logn_exponent, 2, 1e-9);
  EXPECT_NEAR(a.logn_residual, 0, 1e-12);
  const ExponentFit b = fit_exponents("b", grid, linear);
  EXPECT_NEAR(b.n_exponent, 1, 1e-12);
  EXPECT_NEAR(b.n_residual, 0, 1e-12);
}

TEST(ExponentFits, RefuseDegenerateInput) {
  EXPECT_FALSE(fit_exponents("x", {64, 128}, {1, 2}).fitted);
  EXPECT_FALSE(fit_exponents("x", {64, 128, 256}, {1, 0, 2}).fitted);
  EXPECT_FALSE(fit_exponents("x", {64, 128, 256}, {1, 0, 2}).reason.empty());
  EXPECT_EQ(median({3, 1, 2}), 2);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
}

TEST(ScalingConfig, ParseAndFormat) {
  const ScalingConfig config = parse_scaling_config(
      "# grid\n d = 2\nr=1\nn_grid=32, 48 ,64\ntrials=2\nmetrics=diam_gn,gap\nseed=5\n");
  EXPECT_EQ(config.n_grid, (std::vector<double>{32, 48, 64}));
  EXPECT_EQ(config.trials, 2u);
  EXPECT_EQ(config.seed, 5u);
  EXPECT_TRUE(config.wants("gap"));
  EXPECT_FALSE(config.wants("t_mix"));
  const ScalingConfig again = parse_scaling_config(format_scaling_config(config));
  EXPECT_EQ(again.n_grid, config.n_grid);
  EXPECT_EQ(again.metrics, config.metrics);
  EXPECT_EQ(again.chi, config.chi);
}

TEST(ScalingConfig, ErrorsCarryLineNumbers) {
  try {
    parse_scaling_config("d=2\nbogus=1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  try {
    parse_scaling_config("d=2\nr=1\ntrials=x\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_scaling_config("n_grid=64,32\n"), ParseError);
  EXPECT_THROW(parse_scaling_config("metrics=nope\n"), ParseError);
  EXPECT_THROW(parse_scaling_config("no equals sign\n"), ParseError);
}

TEST(ScalingConfig, RegimeFlags) {
  const RegimeFlags flags = regime_flags(ScalingConfig{});
  EXPECT_TRUE(flags.chi_above_one);
  EXPECT_FALSE(flags.chi_at_most_lower);
  EXPECT_TRUE(flags.annulus_above_half);
  ScalingConfig low;
  low.chi = -1.5;
  EXPECT_TRUE(regime_flags(low).chi_at_most_lower);
}

TEST(ScalingSweep, SmallGridIsDeterministicAcrossThreads) {
  ScalingConfig config;
  config.n_grid = {16, 20, 24};
  config.trials = 2;
  set_default_threads(1);
  const ScalingReport one = scaling_sweep(config);
  set_default_threads(3);
  const ScalingReport three = scaling_sweep(config);
  set_default_threads(1);
  ASSERT_EQ(one.rows.size(), 6u);
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    EXPECT_TRUE(one.rows[i].ok) << one.rows[i].error;
    EXPECT_EQ(one.rows[i].values, three.rows[i].values);
    EXPECT_EQ(one.rows[i].seed, scaling_trial_seed(1, one.rows[i].n, one.rows[i].trial));
  }
  EXPECT_TRUE(one.fit("diam_gn").fitted);
  EXPECT_EQ(one.fit("diam_gn").n_exponent, three.fit("diam_gn").n_exponent);
  EXPECT_FALSE(scaling_budget(config).empty());
}

}  // namespace
}  // namespace pgsw
