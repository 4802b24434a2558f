#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace ebm {

/// Deterministic 64-bit PRNG (xoshiro256** seeded via splitmix64).
///
/// All stochastic code in the library draws through this class so that a
/// run is reproducible from a single seed and independent streams can be
/// derived for parallel work (see derive_seed).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform index in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n) {
    // Modulo bias is negligible for the population sizes used here.
    return static_cast<std::size_t>(next_u64() % n);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller. Consumes exactly two uniforms per
  /// call (no cached spare), keeping the draw count predictable.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  double cauchy(double location, double scale) {
    double u = uniform();
    while (u == 0.5) u = uniform();
    return location + scale * std::tan(std::numbers::pi * (u - 0.5));
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

/// Derive a child seed from a master seed and a path of indices
/// (e.g. {run, iteration, agent}). Children are statistically independent
/// of each other and of the parent stream, so work can be parallelised
/// without changing results.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t x = master;
  std::uint64_t out = Rng::splitmix64(x);
  for (std::uint64_t part : path) {
    x = out ^ (part + 0x9e3779b97f4a7c15ULL);
    out = Rng::splitmix64(x);
  }
  return out;
}

}  // namespace ebm
