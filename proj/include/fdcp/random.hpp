#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "fdcp/errors.hpp"

namespace fdcp {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// A reproducible random stream identified by (seed, label, index).
///
/// Distinct labels or indices give statistically independent substreams, so
/// Monte Carlo replicates can run on any worker and still reproduce the same
/// numbers. All samplers are implemented here rather than through
/// <random> distributions, whose algorithms are implementation-defined.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::string_view label, std::uint64_t index = 0)
      : engine_(derive_key(seed, label, index)) {}

  static std::uint64_t derive_key(std::uint64_t seed, std::string_view label,
                                  std::uint64_t index) noexcept {
    std::uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ fnv1a(label));
    return splitmix64(k ^ splitmix64(index));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via the Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  /// Gamma(shape, rate) by Marsaglia-Tsang squeeze; shapes below one are
  /// boosted through Gamma(shape + 1) * U^(1/shape).
  double gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0)) {
      throw ParameterError("gamma sampler needs shape > 0 and rate > 0");
    }
    if (shape < 1.0) {
      for (;;) {
        const double x = standard_gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
        // U^(1/shape) can underflow for tiny shapes; life times must stay positive.
        if (x > 0.0) return x / rate;
      }
    }
    return standard_gamma(shape) / rate;
  }

 private:
  double standard_gamma(double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fdcp
