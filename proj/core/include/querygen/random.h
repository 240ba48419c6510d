#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace querygen {

// Seedable pseudo-random source with a platform-independent output
// sequence. The engine is std::mt19937_64 (its output is fixed by the C++
// standard); the integer and real mappings below are our own because the
// standard <random> distributions are implementation-defined.
//
//   uniform(n)      rejection sampling on raw 64-bit draws, threshold
//                   2^64 mod n, result = draw mod n
//   uniform01()     top 53 bits of a raw draw times 2^-53
//   bernoulli(p)    uniform01() < p
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n). n must be > 0.
  std::uint64_t uniform(std::uint64_t n);

  // Uniform in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  double uniform01();

  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  bool bernoulli(double p) { return uniform01() < p; }

  template <typename T>
  const T& pick(std::span<const T> items) {
    return items[static_cast<std::size_t>(uniform(items.size()))];
  }
  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return pick(std::span<const T>(items));
  }

  // Partial Fisher-Yates: k distinct indices from [0, n), in draw order.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace querygen
