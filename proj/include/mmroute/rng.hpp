#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>

namespace mmroute {

/// Deterministic 64-bit mixer (SplitMix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

/// Derives a child seed from a base seed and a tuple of integer tags.
/// Used to index random streams by (episode, step, link) and similar keys.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

/// Seeded random stream. The distributions are written out here rather than
/// using <random> distributions so draws are identical across standard
/// library implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01();

  /// Uniform in [lo, hi); returns lo when lo == hi.
  double uniform(double lo, double hi);

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  /// Uniform integer in [lo, hi] (inclusive).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Fisher-Yates shuffle driven by index().
  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = index(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mmroute
