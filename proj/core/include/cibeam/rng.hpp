#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace cibeam {

/// Deterministic, splittable random source. Every stochastic operation in the
/// library takes one of these explicitly; there is no global state. Forks are
/// derived from the root seed (not from engine state), so the sub-stream for a
/// given (label, index) pair is stable no matter how much the parent has been
/// consumed. That is what makes per-trial parallelism reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  /// Independent sub-stream identified by a purpose label and an index.
  Rng fork(std::uint64_t label, std::uint64_t index = 0) const {
    std::uint64_t s = seed_;
    s = mix(s ^ (0x9e3779b97f4a7c15ULL + label));
    s = mix(s ^ (0xbf58476d1ce4e5b9ULL + index));
    return Rng(s);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t uniform_index(std::uint64_t bound) {
    return engine_() % bound;  // bias negligible for bound << 2^64
  }

  bool bit() { return (engine_() >> 63) != 0; }

  /// Standard normal via Box-Muller; pairs are cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(t);
    has_cached_ = true;
    return r * std::cos(t);
  }

  /// Circularly-symmetric complex normal, unit total variance.
  std::complex<double> complex_normal() {
    constexpr double half = 0.7071067811865476;  // 1/sqrt(2)
    const double re = normal();
    const double im = normal();
    return {re * half, im * half};
  }

  std::uint64_t seed() const { return seed_; }

 private:
  // splitmix64 finalizer; decorrelates nearby seeds.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Fixed fork labels used by the Monte Carlo harness, so that channel, data,
/// and noise streams are independent and precoder-agnostic.
namespace rng_label {
inline constexpr std::uint64_t kChannel = 1;
inline constexpr std::uint64_t kSymbols = 2;
inline constexpr std::uint64_t kNoise = 3;
}  // namespace rng_label

}  // namespace cibeam
