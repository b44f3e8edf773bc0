#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "alq/datagen.hpp"
#include "alq/error.hpp"
#include "alq/glm.hpp"
#include "alq/metrics.hpp"
#include "alq/random.hpp"
#include "alq/strategies.hpp"

namespace alq {

struct SimulationConfig {
  DatasetConfig dataset;
  QueryStrategy strategy;
  int n_queries = 20;
  int batch_size = 2;
  CostModel cost;
  glm::GlmHyperparams glm;
  int rounds = 30;
  std::uint64_t base_seed = 0;
  // Every round reuses the dataset and split generated from base_seed; only
  // the query randomness varies between rounds.
  bool shared_dataset = false;
  bool record_phi = false;
  double phi_delta = 0.05;
  PerformanceMeasure lambda_measure = PerformanceMeasure::auc;
  double confidence = 0.99;

  void validate() const {
    dataset.validate();
    strategy.validate();
    cost.validate();
    glm.validate();
    if (n_queries <= 0) throw ConfigError("n_queries must be positive");
    if (batch_size <= 0) throw ConfigError("batch_size must be positive");
    if (rounds <= 0) throw ConfigError("rounds must be positive");
    if (static_cast<long long>(n_queries) * batch_size > dataset.unlabeled_size)
      throw ConfigError("query budget " + std::to_string(n_queries) + " x " + std::to_string(batch_size) +
                        " exceeds the unlabeled pool of " + std::to_string(dataset.unlabeled_size));
    if (!(phi_delta > 0.0 && phi_delta < 0.5)) throw ConfigError("phi delta must lie in (0, 0.5)");
    if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("confidence must lie in (0, 1)");
  }
};

struct QuerySnapshot {
  int q = 0;
  std::vector<InstanceId> selected_ids;
  MetricSample metrics;
  int labeled_size = 0;
};

/// Interim probabilities over the unlabeled pool at each query (before
/// selection), the final model's probabilities over the original unlabeled
/// pool, and the resulting phi multisets.
struct PhiTrace {
  ProbabilityMap final_probs;
  std::vector<ProbabilityMap> interim_probs;
  std::vector<std::vector<double>> values;
};

struct RoundResult {
  std::uint64_t seed = 0;
  MetricSample initial;  // model fit on the seed pool, before any query
  std::vector<QuerySnapshot> snapshots;
  std::optional<PhiTrace> phi;
};

inline double performance(const MetricSample& m, PerformanceMeasure measure) {
  switch (measure) {
    case PerformanceMeasure::auc: return m.auc_mean();
    case PerformanceMeasure::f1: return m.f1_mean();
    case PerformanceMeasure::auc_f1_mean: return 0.5 * (m.auc_mean() + m.f1_mean());
  }
  return m.auc_mean();
}

inline MetricSample evaluate(const glm::GlmModel& model, const DataPool& labeled,
                             const std::vector<DataPool>& tests, const SimulationConfig& config) {
  MetricSample m;
  for (const auto& pool : tests) {
    std::vector<double> scores, probs;
    std::vector<int> labels;
    scores.reserve(pool.size());
    probs.reserve(pool.size());
    labels.reserve(pool.size());
    for (const auto& inst : pool.instances()) {
      // AUC is rank-based, so the linear score avoids saturated probabilities.
      scores.push_back(glm::decision_value(model, inst.features));
      probs.push_back(glm::predict_proba(model, inst.features));
      labels.push_back(inst.label);
    }
    m.auc_per_test.push_back(auc(scores, labels));
    m.f1_per_test.push_back(f1(probs, labels));
  }
  m.lambda = performance(m, config.lambda_measure);
  m.zeta = positive_ratio(labeled);
  if (m.zeta > 0.0) m.eta = cost_efficiency(m.lambda, m.zeta, config.cost);
  return m;
}

namespace detail {

inline std::vector<ScoredCandidate> score_pool(const glm::GlmModel& model, const DataPool& pool) {
  std::vector<ScoredCandidate> out;
  out.reserve(pool.size());
  for (const auto& inst : pool.instances())
    out.push_back({inst.id, glm::predict_proba(model, inst.features)});
  return out;
}

inline std::vector<InstanceId> select(const SimulationConfig& config,
                                      const std::vector<ScoredCandidate>& candidates, Rng& rng) {
  switch (config.strategy.kind) {
    case StrategyKind::random: {
      std::vector<InstanceId> ids;
      ids.reserve(candidates.size());
      for (const auto& c : candidates) ids.push_back(c.id);
      return select_random(std::move(ids), config.batch_size, rng);
    }
    case StrategyKind::uncertainty:
      return select_uncertainty(candidates, config.batch_size);
    case StrategyKind::shifted_normal:
      return select_shifted_normal(candidates, config.batch_size, beta_params(config.strategy), rng);
  }
  throw ConfigError("unhandled strategy");
}

inline RoundResult run_round_unchecked(const SimulationConfig& config, std::uint64_t round_seed) {
  const std::uint64_t data_seed = config.shared_dataset ? config.base_seed : round_seed;
  Rng data_rng = make_rng(data_seed, Stream::data);
  auto split = split_pools(generate_dataset(config.dataset, data_rng), config.dataset, data_rng);
  Rng query_rng = make_rng(round_seed, Stream::query);

  DataPool& labeled = split.labeled;
  DataPool& unlabeled = split.unlabeled;
  const DataPool original_unlabeled = config.record_phi ? unlabeled : DataPool{};

  RoundResult result;
  result.seed = round_seed;
  if (config.record_phi) result.phi.emplace();

  auto model = glm::fit(labeled, config.glm);
  result.initial = evaluate(model, labeled, split.tests, config);

  for (int q = 1; q <= config.n_queries; ++q) {
    // Strategies see only (id, predicted probability).
    const auto candidates = score_pool(model, unlabeled);
    if (result.phi) {
      ProbabilityMap interim;
      for (const auto& c : candidates) interim.emplace(c.id, c.prob);
      result.phi->interim_probs.push_back(std::move(interim));
    }
    auto selected = select(config, candidates, query_rng);

    // Oracle: reveal the true labels by moving the instances into L.
    for (auto& inst : unlabeled.take(selected)) labeled.push_back(std::move(inst));

    model = glm::fit(labeled, config.glm);
    QuerySnapshot snap;
    snap.q = q;
    snap.selected_ids = std::move(selected);
    snap.metrics = evaluate(model, labeled, split.tests, config);
    snap.labeled_size = static_cast<int>(labeled.size());
    result.snapshots.push_back(std::move(snap));
  }

  if (result.phi) {
    for (const auto& inst : original_unlabeled.instances())
      result.phi->final_probs.emplace(inst.id, glm::predict_proba(model, inst.features));
    for (const auto& interim : result.phi->interim_probs) {
      ProbabilityMap final_subset;
      for (const auto& [id, p] : interim) {
        (void)p;
        final_subset.emplace(id, result.phi->final_probs.at(id));
      }
      result.phi->values.push_back(compute_phi(final_subset, interim, config.phi_delta));
    }
  }
  return result;
}

}  // namespace detail

/// One active-learning round: generate and split, fit on L, then n_queries
/// times score U, select, reveal, refit and evaluate.
inline RoundResult run_round(const SimulationConfig& config, std::uint64_t round_seed) {
  config.validate();
  try {
    return detail::run_round_unchecked(config, round_seed);
  } catch (const RoundError&) {
    throw;
  } catch (const std::exception& e) {
    throw RoundError(round_seed, e.what());
  }
}

struct QueryAggregate {
  int q = 0;
  int labeled_size = 0;
  std::optional<CiSummary> lambda;
  std::optional<CiSummary> zeta;
  std::optional<CiSummary> eta;
  std::optional<CiSummary> auc;
  std::optional<CiSummary> f1;
  std::size_t n_missing_eta = 0;
};

struct ExperimentSummary {
  SimulationConfig config;
  QueryAggregate initial;               // q = 0
  std::vector<QueryAggregate> per_query;  // q = 1..n_queries
};

/// Mean and interval; a single sample gives a zero-width interval and no
/// samples gives nothing.
inline std::optional<CiSummary> summarize(const std::vector<double>& values, double confidence) {
  if (values.empty()) return std::nullopt;
  if (values.size() == 1) return CiSummary{values[0], values[0], values[0], 0.0, confidence, 1};
  return mean_ci(values, confidence);
}

namespace detail {

inline QueryAggregate aggregate_query(const std::vector<const MetricSample*>& samples, int q,
                                      int labeled_size, double confidence) {
  std::vector<double> lambda, zeta, eta, auc_v, f1_v;
  QueryAggregate agg;
  agg.q = q;
  agg.labeled_size = labeled_size;
  for (const MetricSample* m : samples) {
    lambda.push_back(m->lambda);
    zeta.push_back(m->zeta);
    if (m->eta) eta.push_back(*m->eta);
    else ++agg.n_missing_eta;
    auc_v.push_back(m->auc_mean());
    f1_v.push_back(m->f1_mean());
  }
  agg.lambda = summarize(lambda, confidence);
  agg.zeta = summarize(zeta, confidence);
  agg.eta = summarize(eta, confidence);
  agg.auc = summarize(auc_v, confidence);
  agg.f1 = summarize(f1_v, confidence);
  return agg;
}

}  // namespace detail

/// Per-query aggregation across rounds. Rounds are ordered by seed first, so
/// the result does not depend on the order they were produced in.
inline ExperimentSummary aggregate(const SimulationConfig& config, std::vector<RoundResult> rounds) {
  if (rounds.empty()) throw InsufficientDataError("no rounds to aggregate");
  std::sort(rounds.begin(), rounds.end(),
            [](const RoundResult& a, const RoundResult& b) { return a.seed < b.seed; });
  ExperimentSummary summary;
  summary.config = config;

  std::vector<const MetricSample*> samples;
  for (const auto& r : rounds) samples.push_back(&r.initial);
  summary.initial = detail::aggregate_query(samples, 0, config.dataset.labeled_size, config.confidence);

  for (int q = 1; q <= config.n_queries; ++q) {
    samples.clear();
    for (const auto& r : rounds) {
      if (static_cast<int>(r.snapshots.size()) < q)
        throw InsufficientDataError("round " + std::to_string(r.seed) + " is missing query " + std::to_string(q));
      samples.push_back(&r.snapshots[static_cast<std::size_t>(q - 1)].metrics);
    }
    summary.per_query.push_back(detail::aggregate_query(
        samples, q, rounds.front().snapshots[static_cast<std::size_t>(q - 1)].labeled_size, config.confidence));
  }
  return summary;
}

/// Runs the rounds with seeds base_seed + i on up to `jobs` threads. Results
/// are stored by round index; the first failing round (lowest seed) is rethrown.
inline std::vector<RoundResult> run_rounds(const SimulationConfig& config, int jobs = 1) {
  config.validate();
  const auto n = static_cast<std::size_t>(config.rounds);
  std::vector<RoundResult> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = run_round(config, config.base_seed + i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto n_threads = static_cast<std::size_t>(std::clamp(jobs, 1, config.rounds));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

inline ExperimentSummary run_experiment(const SimulationConfig& config, int jobs = 1) {
  return aggregate(config, run_rounds(config, jobs));
}

/// The three strategies on paired seeds: round i sees the same dataset and
/// seed pool under every strategy.
struct Comparison {
  std::vector<ExperimentSummary> summaries;  // random, uncertainty, shifted-normal
  std::vector<std::vector<RoundResult>> rounds;
};

inline Comparison compare_strategies(const SimulationConfig& base, int jobs = 1) {
  Comparison out;
  for (StrategyKind kind : {StrategyKind::random, StrategyKind::uncertainty, StrategyKind::shifted_normal}) {
    SimulationConfig config = base;
    config.strategy.kind = kind;
    auto rounds = run_rounds(config, jobs);
    out.summaries.push_back(aggregate(config, rounds));
    out.rounds.push_back(std::move(rounds));
  }
  return out;
}

}  // namespace alq
