#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace edgetrack {

/// Deterministic pseudo-random stream. Draw mapping is hand-rolled (rather
/// than std:: distributions, whose output is implementation-defined) so the
/// same seed yields the same sequence on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix(seed + 0x9e3779b97f4a7c15ull)) {}

  std::uint64_t next_u64() {
    // xorshift64*; full 64-bit period for nonzero state.
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545f4914f6cdd1dull;
  }

  /// Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  /// Exponential inter-arrival gap with the given rate (events per second).
  double exponential(double rate) {
    double u = next_double();
    return -std::log1p(-u) / rate;
  }

  bool bernoulli(double p) { return next_double() < p; }

  /// Index draw from non-negative weights (all-zero weights pick index 0).
  std::size_t weighted(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0) return 0;
    double x = next_double() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (x < acc) return i;
    }
    return weights.size() - 1;
  }

  /// Independent child stream; used so unrelated draws (traffic vs. query
  /// planting) cannot perturb each other when one side's volume changes.
  Rng fork(std::uint64_t salt) const { return Rng(splitmix(state_ ^ salt)); }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    x = x ^ (x >> 31);
    return x | 1ull;  // keep state nonzero
  }

  std::uint64_t state_;
};

}  // namespace edgetrack
