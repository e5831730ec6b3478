#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace mtd {

/// splitmix64 finalizer. Used to derive independent seeds from (seed, index).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// Seeded random source. The engine is std::mt19937_64 (its output sequence is
/// fixed by the standard); conversions to doubles, indices and permutations
/// are done here because the std distributions differ between libraries.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// True with probability p. Always consumes exactly one draw.
  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::size_t index(std::size_t bound) {
    const std::uint64_t b = bound;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::size_t>(x % b);
  }

  /// Fisher-Yates, back to front.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[index(i)]);
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace mtd
