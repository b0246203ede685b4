#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace embalign {

/// Identity-disjoint train/test partition of an embedding set's rows.
struct SplitSpec {
  std::uint64_t seed = 0;
  double train_fraction = 0.0;
  /// Identities in the order the shuffle drew them; a prefix of
  /// train_identities is itself a valid, smaller training pool.
  std::vector<std::string> train_identities;
  std::vector<std::string> test_identities;
  std::vector<std::size_t> train_rows;  // ascending
  std::vector<std::size_t> test_rows;   // ascending

  friend bool operator==(const SplitSpec&, const SplitSpec&) = default;
};

/// Shuffles the distinct labels with a generator keyed by `seed` and assigns
/// the first floor(fraction * #identities) to training.
///
/// Throws ArgumentError if fraction is outside (0, 1) and DegenerateDataError
/// if there are fewer than two identities or either side would be empty.
SplitSpec identity_disjoint_split(const std::vector<std::string>& labels, double fraction,
                                  std::uint64_t seed);

/// Rows whose label is one of `identities`, ascending.
std::vector<std::size_t> rows_for_identities(const std::vector<std::string>& labels,
                                             const std::vector<std::string>& identities);

struct Pair {
  std::size_t first = 0;   // always < second
  std::size_t second = 0;
  bool genuine = false;

  friend bool operator==(const Pair&, const Pair&) = default;
  friend auto operator<=>(const Pair& a, const Pair& b) {
    if (auto c = a.first <=> b.first; c != 0) return c;
    return a.second <=> b.second;
  }
};

struct PairList {
  std::vector<Pair> pairs;
  std::uint64_t seed = 0;

  std::size_t genuine_count() const;
  std::size_t impostor_count() const;
};

/// Every unordered same-label pair of distinct rows, ascending.
PairList all_genuine_pairs(const std::vector<std::string>& labels);

/// Number of unordered pairs of rows with different labels.
std::uint64_t count_impostor_pairs(const std::vector<std::string>& labels);
std::uint64_t count_genuine_pairs(const std::vector<std::string>& labels);

/// `count` distinct cross-label pairs drawn uniformly without replacement.
/// Throws ArgumentError if fewer than `count` such pairs exist.
PairList sample_impostor_pairs(const std::vector<std::string>& labels, std::size_t count,
                               std::uint64_t seed);

/// Uniform without-replacement samples of each class, genuine pairs first.
PairList sample_pairs_capped(const std::vector<std::string>& labels, std::size_t genuine_count,
                             std::size_t impostor_count, std::uint64_t seed);

}  // namespace embalign
