#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "alq/simulation.hpp"

namespace alq::report {

using nlohmann::json;

inline std::string format_double(double x) {
  if (!std::isfinite(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

// RFC 4180: quote fields containing separators, quotes or line breaks.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline json to_json(const std::optional<CiSummary>& ci) {
  if (!ci) return nullptr;
  return json{{"mean", ci->mean},       {"lower", ci->lower},
              {"upper", ci->upper},     {"half_width", ci->half_width},
              {"confidence", ci->confidence}, {"n", ci->n}};
}

inline json to_json(const QueryAggregate& a) {
  return json{{"q", a.q},
              {"labeled_size", a.labeled_size},
              {"lambda", to_json(a.lambda)},
              {"zeta", to_json(a.zeta)},
              {"eta", to_json(a.eta)},
              {"auc", to_json(a.auc)},
              {"f1", to_json(a.f1)},
              {"n_missing_eta", a.n_missing_eta}};
}

inline json to_json(const SimulationConfig& c) {
  json strategy{{"kind", to_string(c.strategy.kind)}};
  if (c.strategy.kind == StrategyKind::shifted_normal) {
    const auto beta = beta_params(c.strategy);
    strategy["mode"] = c.strategy.mode;
    strategy["concentration"] = c.strategy.concentration;
    strategy["alpha"] = beta.alpha;
    strategy["beta"] = beta.beta;
  }
  return json{
      {"dataset",
       {{"n_features", c.dataset.n_features},
        {"class_sep", c.dataset.class_sep},
        {"flip_y", c.dataset.flip_y},
        {"labeled_size", c.dataset.labeled_size},
        {"unlabeled_size", c.dataset.unlabeled_size},
        {"n_test_pools", c.dataset.n_test_pools},
        {"test_pool_size", c.dataset.test_pool_size},
        {"positive_fraction", c.dataset.positive_fraction}}},
      {"strategy", strategy},
      {"n_queries", c.n_queries},
      {"batch_size", c.batch_size},
      {"cost_c", c.cost.c},
      {"glm",
       {{"l2_penalty", c.glm.l2_penalty},
        {"max_iterations", c.glm.max_iterations},
        {"gradient_tolerance", c.glm.gradient_tolerance}}},
      {"rounds", c.rounds},
      {"base_seed", c.base_seed},
      {"shared_dataset", c.shared_dataset},
      {"phi", c.record_phi},
      {"phi_delta", c.phi_delta},
      {"lambda_measure", to_string(c.lambda_measure)},
      {"confidence", c.confidence}};
}

inline json to_json(const ExperimentSummary& s) {
  json per_query = json::array();
  for (const auto& a : s.per_query) per_query.push_back(to_json(a));
  return json{{"config", to_json(s.config)}, {"initial", to_json(s.initial)}, {"per_query", per_query}};
}

inline constexpr std::string_view kPerQueryHeader =
    "strategy,q,labeled_size,lambda_mean,lambda_lo,lambda_hi,zeta_mean,zeta_lo,zeta_hi,"
    "eta_mean,eta_lo,eta_hi,auc_mean,f1_mean,n_missing_eta";

/// Aggregated per-query rows, ordered by summary then q.
inline void write_per_query_csv(std::ostream& os, const std::vector<const ExperimentSummary*>& summaries) {
  auto ci_fields = [](const std::optional<CiSummary>& ci) {
    if (!ci) return std::string(",,");
    return format_double(ci->mean) + ',' + format_double(ci->lower) + ',' + format_double(ci->upper);
  };
  auto mean_field = [](const std::optional<CiSummary>& ci) { return ci ? format_double(ci->mean) : std::string(); };

  os << kPerQueryHeader << '\n';
  for (const ExperimentSummary* s : summaries) {
    const std::string strategy = csv_field(to_string(s->config.strategy.kind));
    for (const auto& a : s->per_query) {
      os << strategy << ',' << a.q << ',' << a.labeled_size << ',' << ci_fields(a.lambda) << ','
         << ci_fields(a.zeta) << ',' << ci_fields(a.eta) << ',' << mean_field(a.auc) << ','
         << mean_field(a.f1) << ',' << a.n_missing_eta << '\n';
    }
  }
}

/// One row per phi value: `strategy,round_seed,q,final_prob`.
inline void write_phi_csv(std::ostream& os, std::string_view strategy, const std::vector<RoundResult>& rounds) {
  for (const auto& r : rounds) {
    if (!r.phi) continue;
    for (std::size_t q = 0; q < r.phi->values.size(); ++q)
      for (double v : r.phi->values[q])
        os << csv_field(strategy) << ',' << r.seed << ',' << q + 1 << ',' << format_double(v) << '\n';
  }
}

/// Final-query lambda, zeta and eta per strategy with interval bounds.
inline void write_final_table(std::ostream& os, const std::vector<const ExperimentSummary*>& summaries) {
  auto cell = [](const std::optional<CiSummary>& ci) {
    if (!ci) return std::string("n/a");
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.4f [%.4f, %.4f]", ci->mean, ci->lower, ci->upper);
    return std::string(buf);
  };
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %-28s %-28s %-28s\n", "strategy", "lambda", "zeta", "eta");
  os << line;
  for (const ExperimentSummary* s : summaries) {
    if (s->per_query.empty()) continue;
    const auto& last = s->per_query.back();
    std::snprintf(line, sizeof line, "%-16s %-28s %-28s %-28s\n",
                  std::string(to_string(s->config.strategy.kind)).c_str(), cell(last.lambda).c_str(),
                  cell(last.zeta).c_str(), cell(last.eta).c_str());
    os << line;
  }
}

}  // namespace alq::report
