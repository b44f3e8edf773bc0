#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alq/datagen.hpp"
#include "alq/error.hpp"
#include "alq/special.hpp"

namespace alq {

/// Relative cost of labeling one positive instance; 1 means symmetric costs.
struct CostModel {
  double c = 1.0;

  void validate() const {
    if (!(c >= 1.0) || !std::isfinite(c)) throw ConfigError("cost C must be a finite number >= 1");
  }
};

/// Which performance measure plays the role of lambda in cost efficiency.
enum class PerformanceMeasure { auc, f1, auc_f1_mean };

inline PerformanceMeasure parse_performance_measure(std::string_view name) {
  if (name == "auc") return PerformanceMeasure::auc;
  if (name == "f1") return PerformanceMeasure::f1;
  if (name == "auc-f1") return PerformanceMeasure::auc_f1_mean;
  throw ConfigError("unknown performance measure '" + std::string(name) +
                    "'; valid measures: auc, f1, auc-f1");
}

inline std::string_view to_string(PerformanceMeasure m) {
  switch (m) {
    case PerformanceMeasure::auc: return "auc";
    case PerformanceMeasure::f1: return "f1";
    case PerformanceMeasure::auc_f1_mean: return "auc-f1";
  }
  return "auc";
}

struct MetricSample {
  double lambda = 0.0;
  double zeta = 0.0;
  std::optional<double> eta;  // missing when zeta == 0
  std::vector<double> auc_per_test;
  std::vector<double> f1_per_test;

  double auc_mean() const {
    return std::accumulate(auc_per_test.begin(), auc_per_test.end(), 0.0) /
           static_cast<double>(auc_per_test.size());
  }
  double f1_mean() const {
    return std::accumulate(f1_per_test.begin(), f1_per_test.end(), 0.0) /
           static_cast<double>(f1_per_test.size());
  }
};

struct CiSummary {
  double mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double half_width = 0.0;
  double confidence = 0.99;
  std::size_t n = 0;

  bool contains(double x) const { return lower <= x && x <= upper; }
};

/// Mann-Whitney AUC with average ranks for tied scores.
inline double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw UndefinedMetricError("auc: scores and labels differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double rank_sum_pos = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    // ranks i+1 .. j share their average
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        rank_sum_pos += avg_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw UndefinedMetricError("auc requires both classes");
  const double np = static_cast<double>(n_pos);
  const double u = rank_sum_pos - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

inline double f1(std::span<const double> probs, std::span<const int> labels, double threshold = 0.5) {
  if (probs.size() != labels.size()) throw UndefinedMetricError("f1: probs and labels differ in length");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const bool predicted = probs[i] >= threshold;
    const bool actual = labels[i] == 1;
    if (predicted && actual) ++tp;
    else if (predicted) ++fp;
    else if (actual) ++fn;
  }
  if (tp == 0) return 0.0;
  const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return 2.0 * precision * recall / (precision + recall);
}

/// Fraction of positive labels in the labeled pool, seed instances included.
inline double positive_ratio(const DataPool& labeled) {
  if (labeled.empty()) throw UndefinedMetricError("positive ratio of an empty pool");
  return static_cast<double>(labeled.count_positive()) / static_cast<double>(labeled.size());
}

/// eta = lambda / (zeta * C), evaluated as (lambda / zeta) / C so that
/// changing C rescales eta exactly.
inline double cost_efficiency(double lambda, double zeta, const CostModel& cost) {
  cost.validate();
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("cost_efficiency: lambda outside [0, 1]");
  if (!(zeta >= 0.0 && zeta <= 1.0)) throw DomainError("cost_efficiency: zeta outside [0, 1]");
  if (zeta == 0.0) throw UndefinedEfficiencyError("cost efficiency undefined: no positive labels");
  return (lambda / zeta) / cost.c;
}

using ProbabilityMap = std::map<InstanceId, double>;

/// Final-model probabilities of the instances whose interim probability lies
/// in [0.5 - delta, 0.5 + delta], in id order.
inline std::vector<double> compute_phi(const ProbabilityMap& final_probs,
                                       const ProbabilityMap& interim_probs, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw DiagnosticError("phi: delta must lie in (0, 0.5)");
  if (final_probs.size() != interim_probs.size())
    throw DiagnosticError("phi: final and interim probabilities cover different id sets");
  std::vector<double> out;
  auto f = final_probs.begin();
  for (auto it = interim_probs.begin(); it != interim_probs.end(); ++it, ++f) {
    if (f->first != it->first) throw DiagnosticError("phi: final and interim probabilities cover different id sets");
    if (it->second >= 0.5 - delta && it->second <= 0.5 + delta) out.push_back(f->second);
  }
  return out;
}

/// Student-t confidence interval for the mean.
inline CiSummary mean_ci(std::span<const double> samples, double confidence = 0.99) {
  if (samples.size() < 2) throw InsufficientDataError("confidence interval needs at least 2 samples");
  if (!(confidence > 0.0 && confidence < 1.0)) throw DomainError("confidence must lie in (0, 1)");
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const double t = special::student_t_quantile(0.5 + 0.5 * confidence, n - 1.0);
  const double half = t * sd / std::sqrt(n);
  return {mean, mean - half, mean + half, half, confidence, samples.size()};
}

}  // namespace alq
