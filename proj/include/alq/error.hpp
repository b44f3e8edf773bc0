#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace alq {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class PartitionError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class PredictionError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SelectionError : public Error {
 public:
  using Error::Error;
};

/// A metric that is undefined for its input (single-class AUC, empty pool).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

/// Cost efficiency with zero positive ratio.
class UndefinedEfficiencyError : public UndefinedMetricError {
 public:
  using UndefinedMetricError::UndefinedMetricError;
};

class DiagnosticError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Wraps a failure inside one simulation round together with its seed.
class RoundError : public Error {
 public:
  RoundError(std::uint64_t seed, const std::string& what)
      : Error("round with seed " + std::to_string(seed) + " failed: " + what),
        seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

}  // namespace alq
