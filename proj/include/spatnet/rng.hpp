#pragma once

#include <cstdint>
#include <vector>

namespace spatnet {

/// Deterministic 64-bit generator (SplitMix64).
///
/// State update is `s += 0x9E3779B97F4A7C15`; the output is the state run
/// through two xor-shift-multiply mixing rounds.  The algorithm is fixed so
/// that generated topologies are byte-reproducible across implementations;
/// reference outputs for seeds 0 and 42 are committed as test vectors.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). Defined as next_u64() % bound.
  std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

  /// In-place Fisher-Yates shuffle, iterating from the back.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace spatnet
