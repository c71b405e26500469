#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace metaeval {

inline constexpr std::uint64_t kSplitMix64Gamma = 0x9e3779b97f4a7c15ULL;

// splitmix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Folds a sequence of 64-bit fields into one value, one splitmix64 step per
// field: h <- mix64(h + field + gamma), starting from h = 0. Replicate this
// exact chain to reproduce derived seeds elsewhere.
constexpr std::uint64_t hash64(std::initializer_list<std::uint64_t> fields) {
  std::uint64_t h = 0;
  for (std::uint64_t f : fields) h = mix64(h + f + kSplitMix64Gamma);
  return h;
}

// Deterministic stream generator (splitmix64). Distribution mappings are
// written out explicitly so sequences are bit-identical across platforms;
// none of the implementation-defined <random> distributions are used.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kSplitMix64Gamma;
    return mix64(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log() argument.
  double uniform_open() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  // N(0, stddev^2) via Box-Muller; consumes exactly two uniforms.
  double normal(double stddev) {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return stddev * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Uniform integer in [0, n), n >= 1. Fixed-point multiply, no rejection.
  std::uint64_t index(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // Knuth's product method; adequate for the small lambdas used here.
  std::uint64_t poisson(double lambda) {
    const double limit = std::exp(-lambda);
    double p = 1.0;
    std::uint64_t k = 0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

 private:
  std::uint64_t state_;
};

}  // namespace metaeval
