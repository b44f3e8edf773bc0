#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "alq/datagen.hpp"
#include "alq/error.hpp"

namespace alq::glm {

struct GlmHyperparams {
  double l2_penalty = 1e-3;
  int max_iterations = 200;
  double gradient_tolerance = 1e-8;

  void validate() const {
    if (!(l2_penalty >= 0.0) || !std::isfinite(l2_penalty))
      throw ConfigError("l2_penalty must be a non-negative finite number");
    if (max_iterations <= 0) throw ConfigError("max_iterations must be positive");
    if (!(gradient_tolerance > 0.0)) throw ConfigError("gradient_tolerance must be positive");
  }
};

/// Binary logistic regression. When trained on a single-class pool the model
/// degenerates to a constant Laplace-smoothed prior.
struct GlmModel {
  std::vector<double> weights;
  double intercept = 0.0;
  bool converged = false;
  int n_iterations = 0;
  std::optional<double> fallback_prior;

  std::size_t n_features() const noexcept { return weights.size(); }
};

inline double sigmoid(double z) {
  double p;
  if (z >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-z));
  } else {
    const double e = std::exp(z);
    p = e / (1.0 + e);
  }
  // Keep the output strictly inside (0, 1).
  return std::clamp(p, std::numeric_limits<double>::denorm_min(), std::nextafter(1.0, 0.0));
}

// log(1 + exp(z)) without overflow
inline double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z)));
}

inline double linear_predictor(std::span<const double> weights, double intercept,
                               std::span<const double> features) {
  double z = intercept;
  for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * features[j];
  return z;
}

/// Mean negative log-likelihood plus (l2_penalty / 2) * |weights|^2.
inline double objective(const DataPool& pool, const GlmHyperparams& hp,
                        std::span<const double> weights, double intercept) {
  if (pool.empty()) throw TrainingError("objective of an empty pool");
  double nll = 0.0;
  for (const auto& inst : pool.instances()) {
    const double z = linear_predictor(weights, intercept, inst.features);
    nll += softplus(z) - inst.label * z;
  }
  double sq = 0.0;
  for (double w : weights) sq += w * w;
  return nll / static_cast<double>(pool.size()) + 0.5 * hp.l2_penalty * sq;
}

/// Gradient of `objective`; weights first, intercept last.
inline std::vector<double> gradient(const DataPool& pool, const GlmHyperparams& hp,
                                    std::span<const double> weights, double intercept) {
  if (pool.empty()) throw TrainingError("gradient of an empty pool");
  const std::size_t d = weights.size();
  std::vector<double> g(d + 1, 0.0);
  for (const auto& inst : pool.instances()) {
    const double r = sigmoid(linear_predictor(weights, intercept, inst.features)) - inst.label;
    for (std::size_t j = 0; j < d; ++j) g[j] += r * inst.features[j];
    g[d] += r;
  }
  const double n = static_cast<double>(pool.size());
  for (std::size_t j = 0; j < d; ++j) g[j] = g[j] / n + hp.l2_penalty * weights[j];
  g[d] /= n;
  return g;
}

inline GlmModel fit(const DataPool& pool, const GlmHyperparams& hp = {}) {
  hp.validate();
  if (pool.empty()) throw TrainingError("cannot fit a model on an empty pool");
  const std::size_t d = pool[0].features.size();
  for (const auto& inst : pool.instances())
    if (inst.features.size() != d) throw TrainingError("inconsistent feature dimensions in pool");

  const std::size_t n_pos = pool.count_positive();
  GlmModel model;
  model.weights.assign(d, 0.0);
  if (n_pos == 0 || n_pos == pool.size()) {
    model.fallback_prior = (static_cast<double>(n_pos) + 1.0) / (static_cast<double>(pool.size()) + 2.0);
    model.converged = true;
    return model;
  }

  const double n = static_cast<double>(pool.size());
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d + 1));
  auto weights_of = [d](const Eigen::VectorXd& t) { return std::span<const double>(t.data(), d); };
  double f = objective(pool, hp, weights_of(theta), theta[d]);

  for (int iter = 0; iter < hp.max_iterations; ++iter) {
    const auto g_vec = gradient(pool, hp, weights_of(theta), theta[d]);
    const Eigen::Map<const Eigen::VectorXd> g(g_vec.data(), static_cast<Eigen::Index>(d + 1));
    model.n_iterations = iter;
    if (g.cwiseAbs().maxCoeff() < hp.gradient_tolerance) {
      model.converged = true;
      break;
    }

    Eigen::MatrixXd hessian = Eigen::MatrixXd::Zero(g.size(), g.size());
    Eigen::VectorXd x(g.size());
    for (const auto& inst : pool.instances()) {
      for (std::size_t j = 0; j < d; ++j) x[static_cast<Eigen::Index>(j)] = inst.features[j];
      x[static_cast<Eigen::Index>(d)] = 1.0;
      const double p = sigmoid(x.dot(theta));
      hessian.selfadjointView<Eigen::Lower>().rankUpdate(x, p * (1.0 - p) / n);
    }
    hessian = hessian.selfadjointView<Eigen::Lower>();
    for (std::size_t j = 0; j < d; ++j) hessian(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) += hp.l2_penalty;

    Eigen::VectorXd step;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      step = -ldlt.solve(g);
    }
    if (step.size() == 0 || !step.allFinite() || step.dot(g) >= 0.0) step = -g;

    // Backtracking (Armijo) line search.
    double scale = 1.0;
    const double slope = step.dot(g);
    Eigen::VectorXd candidate;
    double f_new = f;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      candidate = theta + scale * step;
      f_new = objective(pool, hp, weights_of(candidate), candidate[d]);
      if (f_new <= f + 1e-4 * scale * slope) {
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) {
      // No representable decrease left; accept the current point.
      model.n_iterations = iter + 1;
      break;
    }
    theta = candidate;
    f = f_new;
    model.n_iterations = iter + 1;
  }
  if (!model.converged) {
    const auto g_vec = gradient(pool, hp, weights_of(theta), theta[d]);
    double gmax = 0.0;
    for (double v : g_vec) gmax = std::max(gmax, std::fabs(v));
    model.converged = gmax < hp.gradient_tolerance;
  }

  for (std::size_t j = 0; j < d; ++j) model.weights[j] = theta[static_cast<Eigen::Index>(j)];
  model.intercept = theta[static_cast<Eigen::Index>(d)];
  return model;
}

/// intercept + weights . features, or the prior's log-odds for a fallback model.
inline double decision_value(const GlmModel& model, std::span<const double> features) {
  if (features.size() != model.n_features())
    throw PredictionError("expected " + std::to_string(model.n_features()) + " features, got " +
                          std::to_string(features.size()));
  if (model.fallback_prior) {
    const double p = *model.fallback_prior;
    return std::log(p / (1.0 - p));
  }
  return linear_predictor(model.weights, model.intercept, features);
}

inline double predict_proba(const GlmModel& model, std::span<const double> features) {
  const double z = decision_value(model, features);
  if (model.fallback_prior) return *model.fallback_prior;
  return sigmoid(z);
}

inline nlohmann::json to_json(const GlmModel& model) {
  return nlohmann::json{{"weights", model.weights},
                        {"intercept", model.intercept},
                        {"converged", model.converged}};
}

}  // namespace alq::glm
