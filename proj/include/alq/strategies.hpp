#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_set>
#include <utility>
#include <vector>

#include "alq/datagen.hpp"
#include "alq/error.hpp"
#include "alq/random.hpp"
#include "alq/special.hpp"

namespace alq {

enum class StrategyKind { random, uncertainty, shifted_normal };

struct QueryStrategy {
  StrategyKind kind = StrategyKind::random;
  // Only meaningful for shifted_normal.
  double mode = 0.45;
  double concentration = 12.0;

  void validate() const {
    if (kind != StrategyKind::shifted_normal) return;
    if (!(mode > 0.0 && mode < 1.0)) throw ParameterError("shifted-normal mode must lie in (0, 1)");
    if (!(concentration > 2.0) || !std::isfinite(concentration))
      throw ParameterError("shifted-normal concentration must be greater than 2");
  }
};

inline constexpr std::string_view kStrategyNames[] = {"random", "uncertainty", "shifted-normal"};

inline std::string_view to_string(StrategyKind kind) {
  return kStrategyNames[static_cast<int>(kind)];
}

inline StrategyKind parse_strategy(std::string_view name) {
  for (int i = 0; i < 3; ++i)
    if (kStrategyNames[i] == name) return static_cast<StrategyKind>(i);
  throw ConfigError("unknown strategy '" + std::string(name) +
                    "'; valid strategies: random, uncertainty, shifted-normal");
}

struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const {
    if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
      throw ParameterError("Beta parameters must be positive and finite");
  }
  double mean() const { return alpha / (alpha + beta); }
  double mode() const { return (alpha - 1.0) / (alpha + beta - 2.0); }
};

/// Beta parameters with the requested interior mode; alpha + beta = concentration.
inline BetaParams beta_from_mode(double mode, double concentration) {
  if (!(mode > 0.0 && mode < 1.0)) throw ParameterError("mode must lie in (0, 1)");
  if (!(concentration > 2.0) || !std::isfinite(concentration))
    throw ParameterError("concentration must be greater than 2");
  return {1.0 + mode * (concentration - 2.0), 1.0 + (1.0 - mode) * (concentration - 2.0)};
}

inline BetaParams beta_params(const QueryStrategy& strategy) {
  return beta_from_mode(strategy.mode, strategy.concentration);
}

inline double beta_pdf(const BetaParams& params, double x) {
  params.validate();
  if (!(x > 0.0 && x < 1.0)) throw DomainError("beta_pdf: x outside (0, 1)");
  return std::exp((params.alpha - 1.0) * std::log(x) + (params.beta - 1.0) * std::log1p(-x) -
                  special::log_beta(params.alpha, params.beta));
}

inline double beta_cdf(const BetaParams& params, double x) {
  params.validate();
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return special::incomplete_beta(params.alpha, params.beta, x);
}

/// Beta draw as G_a / (G_a + G_b) with Marsaglia-Tsang gamma variates.
/// Requires alpha, beta >= 1, which every beta_from_mode result satisfies.
template <class URBG>
double beta_sample(const BetaParams& params, URBG& rng) {
  params.validate();
  if (params.alpha < 1.0 || params.beta < 1.0)
    throw ParameterError("beta_sample requires alpha >= 1 and beta >= 1");
  for (;;) {
    const double x = gamma_variate(params.alpha, rng);
    const double y = gamma_variate(params.beta, rng);
    const double t = x / (x + y);
    if (t > 0.0 && t < 1.0) return t;
  }
}

/// An unlabeled instance as seen by a query strategy: its id and the interim
/// model's predicted probability, nothing else.
struct ScoredCandidate {
  InstanceId id = 0;
  double prob = 0.5;
};

namespace detail {

inline void check_request(std::size_t available, int k) {
  if (k <= 0) throw SelectionError("batch size must be positive");
  if (static_cast<std::size_t>(k) > available)
    throw SelectionError("requested " + std::to_string(k) + " instances from a pool of " +
                         std::to_string(available));
}

inline void check_candidates(std::span<const ScoredCandidate> candidates) {
  std::unordered_set<InstanceId> seen;
  for (const auto& c : candidates) {
    if (!(c.prob > 0.0 && c.prob < 1.0))
      throw SelectionError("candidate " + std::to_string(c.id) + " has probability outside (0, 1)");
    if (!seen.insert(c.id).second)
      throw SelectionError("duplicate candidate id " + std::to_string(c.id));
  }
}

}  // namespace detail

template <class URBG>
std::vector<InstanceId> select_random(std::vector<InstanceId> pool_ids, int k, URBG& rng) {
  detail::check_request(pool_ids.size(), k);
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool_ids.size() - 1);
    std::swap(pool_ids[i], pool_ids[pick(rng)]);
  }
  pool_ids.resize(static_cast<std::size_t>(k));
  return pool_ids;
}

/// Least confidence: the k candidates closest to 0.5, ties to the lower id.
inline std::vector<InstanceId> select_uncertainty(std::span<const ScoredCandidate> candidates, int k) {
  detail::check_request(candidates.size(), k);
  detail::check_candidates(candidates);
  std::vector<ScoredCandidate> sorted(candidates.begin(), candidates.end());
  auto key = [](const ScoredCandidate& c) { return std::make_tuple(std::fabs(c.prob - 0.5), c.id); };
  std::partial_sort(sorted.begin(), sorted.begin() + k, sorted.end(),
                    [&](const ScoredCandidate& a, const ScoredCandidate& b) { return key(a) < key(b); });
  std::vector<InstanceId> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) out.push_back(sorted[static_cast<std::size_t>(i)].id);
  return out;
}

/// For each of k picks, draws a target probability from `draw_target()` and
/// takes the remaining candidate nearest to it (ties to the lower id).
template <class TargetFn>
std::vector<InstanceId> select_nearest_to_targets(std::span<const ScoredCandidate> candidates, int k,
                                                  TargetFn&& draw_target) {
  detail::check_request(candidates.size(), k);
  detail::check_candidates(candidates);
  std::vector<bool> taken(candidates.size(), false);
  std::vector<InstanceId> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int pick = 0; pick < k; ++pick) {
    const double target = draw_target();
    std::size_t best = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (taken[i]) continue;
      if (best == candidates.size()) {
        best = i;
        continue;
      }
      const double dist = std::fabs(candidates[i].prob - target);
      const double best_dist = std::fabs(candidates[best].prob - target);
      if (dist < best_dist || (dist == best_dist && candidates[i].id < candidates[best].id)) best = i;
    }
    taken[best] = true;
    out.push_back(candidates[best].id);
  }
  return out;
}

template <class URBG>
std::vector<InstanceId> select_shifted_normal(std::span<const ScoredCandidate> candidates, int k,
                                              const BetaParams& params, URBG& rng) {
  params.validate();
  return select_nearest_to_targets(candidates, k, [&] { return beta_sample(params, rng); });
}

}  // namespace alq
