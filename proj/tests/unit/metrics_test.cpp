#include "alq/metrics.hpp"

#include <cmath>
#include <random>

#include <boost/math/distributions/students_t.hpp>
#include <gtest/gtest.h>

namespace alq {
namespace {

double auc_pairs(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (y[i] == 1 && y[j] == 0) {
        pairs += 1.0;
        wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      }
  return wins / pairs;
}

void random_case(std::mt19937_64& rng, std::size_t n, bool ties, std::vector<double>& s, std::vector<int>& y) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> coarse(0, 4);
  s.resize(n);
  y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = ties ? coarse(rng) / 4.0 : u(rng);
    y[i] = u(rng) < 0.5;
  }
  y[0] = 0;
  y[1] = 1;
}

TEST(Auc, ClosedFormCases) {
  EXPECT_EQ(auc(std::vector<double>{0.1, 0.9}, std::vector<int>{0, 1}), 1.0);
  EXPECT_EQ(auc(std::vector<double>{0.9, 0.1}, std::vector<int>{0, 1}), 0.0);
  EXPECT_EQ(auc(std::vector<double>{0.5, 0.5, 0.5, 0.5}, std::vector<int>{0, 1, 0, 1}), 0.5);
}

TEST(Auc, MatchesPairCounting) {
  std::mt19937_64 rng(31);
  std::vector<double> s;
  std::vector<int> y;
  for (int trial = 0; trial < 200; ++trial) {
    random_case(rng, 30, trial % 2 == 1, s, y);
    EXPECT_NEAR(auc(s, y), auc_pairs(s, y), 1e-12);
  }
}

TEST(Auc, InvariantUnderMonotoneTransform) {
  std::mt19937_64 rng(32);
  std::vector<double> s;
  std::vector<int> y;
  random_case(rng, 40, false, s, y);
  std::vector<double> t(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) t[i] = std::exp(3.0 * s[i]) - 7.0;
  EXPECT_EQ(auc(s, y), auc(t, y));
}

TEST(Auc, ComplementWithFlippedLabels) {
  std::mt19937_64 rng(33);
  std::vector<double> s;
  std::vector<int> y;
  for (bool ties : {false, true}) {
    random_case(rng, 25, ties, s, y);
    std::vector<int> flipped(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) flipped[i] = 1 - y[i];
    EXPECT_NEAR(auc(s, y) + auc(s, flipped), 1.0, 1e-12);
  }
}

TEST(Auc, SingleClassIsUndefined) {
  EXPECT_THROW(auc(std::vector<double>{0.2, 0.3}, std::vector<int>{1, 1}), UndefinedMetricError);
  EXPECT_THROW(auc(std::vector<double>{0.2}, std::vector<int>{1, 0}), UndefinedMetricError);
}

TEST(F1, ClosedFormCases) {
  EXPECT_EQ(f1(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0}), 1.0);
  EXPECT_EQ(f1(std::vector<double>{0.1, 0.1}, std::vector<int>{1, 1}), 0.0);
  EXPECT_DOUBLE_EQ(f1(std::vector<double>{0.9, 0.9, 0.1, 0.1}, std::vector<int>{1, 0, 1, 0}), 0.5);
  EXPECT_EQ(f1(std::vector<double>{0.6, 0.7}, std::vector<int>{0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(f1(std::vector<double>{0.6, 0.7}, std::vector<int>{1, 0}, 0.65), 0.0);
}

TEST(PositiveRatio, Counts) {
  std::vector<Instance> rows;
  for (int i = 0; i < 10; ++i) rows.push_back({i, {0.0}, i < 4 ? 1 : 0});
  EXPECT_DOUBLE_EQ(positive_ratio(DataPool(PoolRole::labeled, rows)), 0.4);
  for (auto& r : rows) r.label = 0;
  EXPECT_EQ(positive_ratio(DataPool(PoolRole::labeled, rows)), 0.0);
  EXPECT_THROW(positive_ratio(DataPool{}), UndefinedMetricError);
}

TEST(CostEfficiency, Arithmetic) {
  EXPECT_DOUBLE_EQ(cost_efficiency(0.8, 0.5, {}), 1.6);
  EXPECT_NEAR(cost_efficiency(0.9, 0.45, {3.0}), 0.6667, 1e-4);
  EXPECT_THROW(cost_efficiency(0.8, 0.0, {}), UndefinedEfficiencyError);
  EXPECT_THROW(cost_efficiency(0.8, 0.5, {0.5}), ConfigError);
}

TEST(CostEfficiency, ScalesExactlyWithCost) {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double lambda = u(rng), zeta = u(rng), c = 1.0 + 9.0 * u(rng);
    EXPECT_EQ(cost_efficiency(lambda, zeta, {c}), cost_efficiency(lambda, zeta, {1.0}) / c);
  }
}

TEST(ComputePhi, IdentityStaysInBand) {
  ProbabilityMap probs;
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (InstanceId id = 0; id < 500; ++id) probs[id] = u(rng);
  const auto phi = compute_phi(probs, probs, 0.05);
  EXPECT_FALSE(phi.empty());
  for (double v : phi) {
    EXPECT_GE(v, 0.45);
    EXPECT_LE(v, 0.55);
  }
}

TEST(ComputePhi, EmptyWhenNothingUncertain) {
  const ProbabilityMap interim{{1, 0.1}, {2, 0.9}};
  const ProbabilityMap final_probs{{1, 0.5}, {2, 0.5}};
  EXPECT_TRUE(compute_phi(final_probs, interim, 0.05).empty());
}

TEST(ComputePhi, MatchesLinearScan) {
  std::mt19937_64 rng(36);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  ProbabilityMap interim, final_probs;
  for (InstanceId id = 0; id < 300; ++id) {
    interim[id * 3] = u(rng);
    final_probs[id * 3] = u(rng);
  }
  std::vector<double> expected;
  for (const auto& [id, p] : interim)
    if (std::fabs(p - 0.5) <= 0.1) expected.push_back(final_probs.at(id));
  const auto phi = compute_phi(final_probs, interim, 0.1);
  EXPECT_EQ(phi, expected);
  EXPECT_LE(phi.size(), interim.size());
}

TEST(ComputePhi, Errors) {
  const ProbabilityMap a{{1, 0.5}, {2, 0.5}};
  const ProbabilityMap b{{1, 0.5}, {3, 0.5}};
  const ProbabilityMap c{{1, 0.5}};
  EXPECT_THROW(compute_phi(a, b, 0.05), DiagnosticError);
  EXPECT_THROW(compute_phi(a, c, 0.05), DiagnosticError);
  EXPECT_THROW(compute_phi(a, a, 0.0), DiagnosticError);
}

TEST(MeanCi, ConstantSamples) {
  const std::vector<double> s(10, 0.7);
  const auto ci = mean_ci(s);
  EXPECT_DOUBLE_EQ(ci.mean, 0.7);
  EXPECT_DOUBLE_EQ(ci.lower, 0.7);
  EXPECT_DOUBLE_EQ(ci.upper, 0.7);
}

TEST(MeanCi, ThirtySamplesAtNinetyNinePercent) {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> g(1.0, 0.3);
  std::vector<double> s(30);
  for (auto& x : s) x = g(rng);
  double mean = 0.0;
  for (double x : s) mean += x / 30.0;
  double ss = 0.0;
  for (double x : s) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / 29.0);
  const double t = boost::math::quantile(boost::math::students_t(29.0), 0.995);
  const auto ci = mean_ci(s, 0.99);
  EXPECT_NEAR(ci.half_width, t * sd / std::sqrt(30.0), 1e-9);
  EXPECT_NEAR(ci.mean, mean, 1e-14);
  EXPECT_EQ(ci.n, 30u);
  EXPECT_NEAR(ci.mean - ci.lower, ci.upper - ci.mean, 1e-15);
  EXPECT_EQ(ci.lower, ci.mean - ci.half_width);
  EXPECT_EQ(ci.upper, ci.mean + ci.half_width);
}

TEST(MeanCi, HalfWidthShrinksWithSampleSize) {
  // Two-point pattern repeated keeps the sample variance close to fixed.
  auto half = [](std::size_t n) {
    std::vector<double> s;
    for (std::size_t i = 0; i < n; ++i) s.push_back(i % 2 ? 1.0 : -1.0);
    return mean_ci(s, 0.99).half_width;
  };
  EXPECT_GT(half(10), half(40));
  EXPECT_GT(half(40), half(160));
  // Ratio tends to 2 (1/sqrt(n) scaling) for large n.
  EXPECT_NEAR(half(4000) / half(16000), 2.0, 1e-3);
}

TEST(MeanCi, NeedsTwoSamples) {
  EXPECT_THROW(mean_ci(std::vector<double>{1.0}), InsufficientDataError);
  EXPECT_THROW(mean_ci(std::vector<double>{}), InsufficientDataError);
}

}  // namespace
}  // namespace alq
