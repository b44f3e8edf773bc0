#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "alq/error.hpp"
#include "alq/random.hpp"

namespace alq {

using InstanceId = std::int64_t;

struct Instance {
  InstanceId id = 0;
  std::vector<double> features;
  int label = 0;  // 0 negative, 1 positive
};

enum class PoolRole { labeled, unlabeled, test };

/// Ordered set of instances. Unlabeled pools keep the true label in storage;
/// only the simulation loop reads it, when an instance is queried.
class DataPool {
 public:
  DataPool() = default;
  DataPool(PoolRole role, std::vector<Instance> instances)
      : role_(role), instances_(std::move(instances)) {}

  PoolRole role() const noexcept { return role_; }
  std::size_t size() const noexcept { return instances_.size(); }
  bool empty() const noexcept { return instances_.empty(); }
  const std::vector<Instance>& instances() const noexcept { return instances_; }
  const Instance& operator[](std::size_t i) const { return instances_[i]; }

  std::vector<InstanceId> ids() const {
    std::vector<InstanceId> out;
    out.reserve(instances_.size());
    for (const auto& inst : instances_) out.push_back(inst.id);
    return out;
  }

  std::size_t count_positive() const {
    return static_cast<std::size_t>(std::count_if(
        instances_.begin(), instances_.end(), [](const Instance& i) { return i.label == 1; }));
  }

  void push_back(Instance inst) { instances_.push_back(std::move(inst)); }

  /// Removes the instances with the given ids and returns them in the order
  /// the ids were given. Throws SelectionError if an id is absent.
  std::vector<Instance> take(const std::vector<InstanceId>& ids) {
    std::vector<Instance> taken;
    taken.reserve(ids.size());
    for (InstanceId id : ids) {
      auto it = std::find_if(instances_.begin(), instances_.end(),
                             [id](const Instance& i) { return i.id == id; });
      if (it == instances_.end())
        throw SelectionError("instance " + std::to_string(id) + " not in pool");
      taken.push_back(std::move(*it));
      instances_.erase(it);
    }
    return taken;
  }

 private:
  PoolRole role_ = PoolRole::unlabeled;
  std::vector<Instance> instances_;
};

struct DatasetConfig {
  int n_features = 4;
  double class_sep = 1.0;
  double flip_y = 0.0;
  int labeled_size = 10;
  int unlabeled_size = 1000;
  int n_test_pools = 3;
  int test_pool_size = 1000;
  double positive_fraction = 0.5;
  std::uint64_t seed = 0;

  std::size_t total_size() const {
    return static_cast<std::size_t>(labeled_size) + static_cast<std::size_t>(unlabeled_size) +
           static_cast<std::size_t>(n_test_pools) * static_cast<std::size_t>(test_pool_size);
  }

  void validate() const {
    if (n_features <= 0) throw ConfigError("n_features must be positive");
    if (!(class_sep > 0.0) || !std::isfinite(class_sep))
      throw ConfigError("class_sep must be a positive finite number");
    if (!(flip_y >= 0.0 && flip_y < 1.0)) throw ConfigError("flip_y must lie in [0, 1)");
    if (labeled_size <= 0) throw ConfigError("labeled_size must be positive");
    if (unlabeled_size <= 0) throw ConfigError("unlabeled_size must be positive");
    if (n_test_pools <= 0) throw ConfigError("n_test_pools must be positive");
    if (test_pool_size <= 0) throw ConfigError("test_pool_size must be positive");
    if (!(positive_fraction > 0.0 && positive_fraction < 1.0))
      throw ConfigError("positive_fraction must lie in (0, 1)");
  }
};

/// Two isotropic unit Gaussians centred on opposite hypercube corners at
/// -class_sep (label 0) and +class_sep (label 1) in every coordinate.
/// Labels are assigned before the optional flip, then the rows are shuffled
/// and ids are the shuffled positions.
inline std::vector<Instance> generate_dataset(const DatasetConfig& config, Rng& rng) {
  config.validate();
  const std::size_t total = config.total_size();
  const auto n_pos = static_cast<std::size_t>(
      std::llround(config.positive_fraction * static_cast<double>(total)));

  std::normal_distribution<double> noise(0.0, 1.0);
  std::bernoulli_distribution flip(config.flip_y);

  std::vector<Instance> rows(total);
  for (std::size_t i = 0; i < total; ++i) {
    const int label = i < n_pos ? 1 : 0;
    const double centre = label == 1 ? config.class_sep : -config.class_sep;
    auto& row = rows[i];
    row.features.resize(static_cast<std::size_t>(config.n_features));
    for (auto& f : row.features) f = centre + noise(rng);
    row.label = label;
    if (config.flip_y > 0.0 && flip(rng)) row.label = 1 - label;
  }
  std::shuffle(rows.begin(), rows.end(), rng);
  for (std::size_t i = 0; i < total; ++i) rows[i].id = static_cast<InstanceId>(i);
  return rows;
}

struct PoolSplit {
  DataPool labeled;
  DataPool unlabeled;
  std::vector<DataPool> tests;
};

inline PoolSplit split_pools(std::vector<Instance> dataset, const DatasetConfig& config, Rng& rng) {
  config.validate();
  if (dataset.size() != config.total_size())
    throw PartitionError("dataset has " + std::to_string(dataset.size()) +
                         " instances, configuration expects " +
                         std::to_string(config.total_size()));
  {
    std::unordered_set<InstanceId> seen;
    for (const auto& inst : dataset)
      if (!seen.insert(inst.id).second)
        throw PartitionError("duplicate instance id " + std::to_string(inst.id));
  }

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  auto cursor = order.begin();
  auto carve = [&](PoolRole role, int n) {
    std::vector<Instance> part;
    part.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i, ++cursor) part.push_back(std::move(dataset[*cursor]));
    return DataPool(role, std::move(part));
  };

  PoolSplit split;
  split.labeled = carve(PoolRole::labeled, config.labeled_size);
  split.unlabeled = carve(PoolRole::unlabeled, config.unlabeled_size);
  for (int t = 0; t < config.n_test_pools; ++t)
    split.tests.push_back(carve(PoolRole::test, config.test_pool_size));
  return split;
}

/// `id,f0,...,f{n-1},label` with 9 significant digits.
inline void write_dataset_csv(std::ostream& os, const std::vector<Instance>& rows) {
  const std::size_t n_features = rows.empty() ? 0 : rows.front().features.size();
  os << "id";
  for (std::size_t j = 0; j < n_features; ++j) os << ",f" << j;
  os << ",label\n";
  char buf[32];
  for (const auto& row : rows) {
    os << row.id;
    for (double f : row.features) {
      std::snprintf(buf, sizeof buf, "%.9g", f);
      os << ',' << buf;
    }
    os << ',' << row.label << '\n';
  }
}

}  // namespace alq
