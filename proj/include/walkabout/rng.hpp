#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace walkabout {

// Seeded generator used by every stochastic routine. The distribution helpers
// are written out here instead of using <random> distributions so a seed gives
// the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

  // Independent child stream; same (seed, stream) always yields the same child.
  Rng split(std::uint64_t stream) const { return Rng(derive(seed_, stream)); }

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);
  static std::uint64_t mix(std::uint64_t x);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace walkabout
