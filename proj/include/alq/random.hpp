#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace alq {

using Rng = std::mt19937_64;

// Independent streams for one seed, e.g. data generation vs query selection.
enum class Stream : std::uint32_t { data = 0, query = 1 };

inline Rng make_rng(std::uint64_t seed, Stream stream = Stream::data) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

/// Gamma(shape, 1) variate for shape >= 1 (Marsaglia & Tsang, 2000).
template <class URBG>
double gamma_variate(double shape, URBG& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (;;) {
    double x;
    double v;
    do {
      x = normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform(rng);
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return d * v;
  }
}

}  // namespace alq
