#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace embalign {

/// Deterministic generator used for every random draw in the library.
///
/// The stream is a std::mt19937_64 (whose output sequence is fixed by the
/// standard) seeded from SplitMix64(seed ^ FNV-1a(tag)). Distributions are
/// implemented here rather than taken from <random>, whose distribution
/// algorithms are implementation-defined. Identical (seed, tag) pairs
/// therefore reproduce identical draws across standard libraries.
class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view tag);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t uniform_index(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Standard normal variate (Marsaglia polar method).
  double normal();

  template <typename It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      const auto j = uniform_index(i);
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view s);

}  // namespace embalign
