#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace urtu {

/// SplitMix64 finalizer; decorrelates child streams from a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// mt19937_64 with hand-rolled draws so every stream is bit-reproducible
/// across platforms (std::*_distribution output is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1).
  double uniform_open() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform on the open interval (lo, hi); draws are strictly inside.
  double uniform_in_open(double lo, double hi) {
    return lo + (hi - lo) * uniform_open();
  }

  /// Exponential waiting time, strictly positive.
  double exponential(double rate) { return -std::log(uniform_open()) / rate; }

  /// Unbiased integer in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    std::uint64_t r;
    do {
      r = bits();
    } while (r < threshold);
    return r % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace urtu
