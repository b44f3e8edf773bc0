#include "alq/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "alq/metrics.hpp"

namespace alq {
namespace {

std::vector<Instance> generate(const DatasetConfig& config) {
  Rng rng = make_rng(config.seed);
  return generate_dataset(config, rng);
}

double feature_sum(const Instance& inst) {
  return std::accumulate(inst.features.begin(), inst.features.end(), 0.0);
}

TEST(GenerateDataset, ProducesWellFormedInstances) {
  DatasetConfig config;
  config.seed = 3;
  const auto rows = generate(config);
  ASSERT_EQ(rows.size(), 4010u);
  std::set<InstanceId> ids;
  for (const auto& r : rows) {
    EXPECT_EQ(r.features.size(), 4u);
    EXPECT_TRUE(r.label == 0 || r.label == 1);
    ids.insert(r.id);
  }
  EXPECT_EQ(ids.size(), rows.size());
}

TEST(GenerateDataset, PositiveCountIsRoundedFraction) {
  DatasetConfig config;
  config.class_sep = 0.5;
  config.seed = 7;
  const auto rows = generate(config);
  const auto positives = std::count_if(rows.begin(), rows.end(), [](const Instance& i) { return i.label == 1; });
  EXPECT_EQ(positives, 2005);

  config.positive_fraction = 0.3;
  const auto skewed = generate(config);
  EXPECT_EQ(std::count_if(skewed.begin(), skewed.end(), [](const Instance& i) { return i.label == 1; }),
            std::llround(0.3 * 4010));
}

TEST(GenerateDataset, LargeSeparationIsLinearlySeparable) {
  DatasetConfig config;
  config.class_sep = 10.0;
  config.labeled_size = 10;
  config.unlabeled_size = 30;
  config.n_test_pools = 3;
  config.test_pool_size = 20;
  config.seed = 11;
  const auto rows = generate(config);
  ASSERT_EQ(rows.size(), 100u);
  // The bisector of the two centroids is the hyperplane sum(features) = 0.
  for (const auto& r : rows) EXPECT_EQ(feature_sum(r) > 0.0 ? 1 : 0, r.label);
}

TEST(GenerateDataset, VanishingSeparationGivesChanceAuc) {
  DatasetConfig config;
  config.class_sep = 1e-12;
  config.seed = 5;
  const auto rows = generate(config);
  std::vector<double> scores;
  std::vector<int> labels;
  for (const auto& r : rows) {
    scores.push_back(feature_sum(r));
    labels.push_back(r.label);
  }
  // Standard error of the AUC with 2005 per class is about 0.0065.
  EXPECT_NEAR(auc(scores, labels), 0.5, 0.03);
}

TEST(GenerateDataset, CentroidDistanceGrowsWithSeparation) {
  double previous = -1.0;
  for (double sep : {0.1, 0.25, 0.5, 1.0, 1.5, 2.0}) {
    DatasetConfig config;
    config.class_sep = sep;
    config.seed = 42;
    const auto rows = generate(config);
    std::vector<double> c0(4, 0.0), c1(4, 0.0);
    double n0 = 0, n1 = 0;
    for (const auto& r : rows) {
      auto& c = r.label == 1 ? c1 : c0;
      (r.label == 1 ? n1 : n0) += 1;
      for (int j = 0; j < 4; ++j) c[j] += r.features[j];
    }
    double dist = 0.0;
    for (int j = 0; j < 4; ++j) dist += std::pow(c1[j] / n1 - c0[j] / n0, 2);
    dist = std::sqrt(dist);
    EXPECT_GT(dist, previous) << "class_sep=" << sep;
    previous = dist;
  }
}

TEST(GenerateDataset, LabelFlipsKeepFeatures) {
  DatasetConfig config;
  config.class_sep = 10.0;
  config.flip_y = 0.2;
  config.seed = 9;
  const auto rows = generate(config);
  std::size_t disagreements = 0;
  for (const auto& r : rows) disagreements += (feature_sum(r) > 0.0 ? 1 : 0) != r.label;
  // Each label flips with probability 0.2; binomial sd is about 25.
  EXPECT_NEAR(static_cast<double>(disagreements) / rows.size(), 0.2, 0.03);
}

TEST(GenerateDataset, RejectsInvalidConfig) {
  DatasetConfig config;
  config.class_sep = 0.0;
  EXPECT_THROW(generate(config), ConfigError);
  config = {};
  config.class_sep = -1.0;
  EXPECT_THROW(generate(config), ConfigError);
  config = {};
  config.unlabeled_size = 0;
  EXPECT_THROW(generate(config), ConfigError);
  config = {};
  config.flip_y = 1.0;
  EXPECT_THROW(generate(config), ConfigError);
  config = {};
  config.positive_fraction = 1.0;
  EXPECT_THROW(generate(config), ConfigError);
}

TEST(GenerateDataset, DeterministicForSeed) {
  DatasetConfig config;
  config.seed = 123;
  const auto a = generate(config);
  const auto b = generate(config);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].id, b[i].id);
    EXPECT_EQ(a[i].label, b[i].label);
    EXPECT_EQ(a[i].features, b[i].features);
  }
}

TEST(SplitPools, UsesConfiguredSizes) {
  DatasetConfig config;
  Rng rng = make_rng(1);
  const auto split = split_pools(generate_dataset(config, rng), config, rng);
  EXPECT_EQ(split.labeled.size(), 10u);
  EXPECT_EQ(split.unlabeled.size(), 1000u);
  ASSERT_EQ(split.tests.size(), 3u);
  for (const auto& t : split.tests) {
    EXPECT_EQ(t.size(), 1000u);
    EXPECT_EQ(t.role(), PoolRole::test);
  }
  EXPECT_EQ(split.labeled.role(), PoolRole::labeled);
  EXPECT_EQ(split.unlabeled.role(), PoolRole::unlabeled);
}

TEST(SplitPools, IsAPartition) {
  DatasetConfig config;
  Rng rng = make_rng(2);
  const auto rows = generate_dataset(config, rng);
  const auto split = split_pools(rows, config, rng);
  std::multiset<InstanceId> seen;
  auto add = [&](const DataPool& p) {
    for (InstanceId id : p.ids()) seen.insert(id);
  };
  add(split.labeled);
  add(split.unlabeled);
  for (const auto& t : split.tests) add(t);
  std::multiset<InstanceId> expected;
  for (const auto& r : rows) expected.insert(r.id);
  EXPECT_EQ(seen, expected);
}

TEST(SplitPools, DeterministicForSeed) {
  DatasetConfig config;
  auto make = [&] {
    Rng rng = make_rng(77);
    return split_pools(generate_dataset(config, rng), config, rng);
  };
  const auto a = make();
  const auto b = make();
  EXPECT_EQ(a.labeled.ids(), b.labeled.ids());
  EXPECT_EQ(a.unlabeled.ids(), b.unlabeled.ids());
  for (std::size_t t = 0; t < a.tests.size(); ++t) EXPECT_EQ(a.tests[t].ids(), b.tests[t].ids());
}

TEST(SplitPools, RejectsSizeMismatch) {
  DatasetConfig config;
  Rng rng = make_rng(4);
  auto rows = generate_dataset(config, rng);
  rows.pop_back();
  EXPECT_THROW(split_pools(rows, config, rng), PartitionError);
}

TEST(DataPool, TakeMovesRequestedInstances) {
  DataPool pool(PoolRole::unlabeled, {{1, {0.0}, 0}, {2, {1.0}, 1}, {3, {2.0}, 0}});
  const auto taken = pool.take({3, 1});
  ASSERT_EQ(taken.size(), 2u);
  EXPECT_EQ(taken[0].id, 3);
  EXPECT_EQ(taken[1].id, 1);
  EXPECT_EQ(pool.ids(), std::vector<InstanceId>{2});
  EXPECT_THROW(pool.take({9}), SelectionError);
}

TEST(DatasetCsv, HeaderAndPrecision) {
  std::vector<Instance> rows{{0, {1.0 / 3.0, -2.0, 1e-10, 12345.6789012}, 1}};
  std::ostringstream os;
  write_dataset_csv(os, rows);
  EXPECT_EQ(os.str(), "id,f0,f1,f2,f3,label\n0,0.333333333,-2,1e-10,12345.6789,1\n");
}

}  // namespace
}  // namespace alq
