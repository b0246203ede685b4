#include "embalign/splits.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "embalign/errors.hpp"
#include "embalign/rng.hpp"

namespace embalign {

namespace {

// Row indices grouped by label, groups ordered by label text.
std::vector<std::vector<std::size_t>> group_rows(const std::vector<std::string>& labels) {
  std::map<std::string_view, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  out.reserve(groups.size());
  for (auto& [label, rows] : groups) out.push_back(std::move(rows));
  return out;
}

std::uint64_t choose2(std::uint64_t m) { return m < 2 ? 0 : m * (m - 1) / 2; }

// The p-th pair (row-major over i < j) among m items.
std::pair<std::size_t, std::size_t> decode_pair(std::uint64_t p, std::size_t m) {
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const std::uint64_t row = m - 1 - i;
    if (p < row) return {i, i + 1 + static_cast<std::size_t>(p)};
    p -= row;
  }
  throw ArgumentError("pair index out of range");
}

// Floyd's algorithm: `count` distinct values from [0, total), uniformly.
std::vector<std::uint64_t> sample_distinct(std::uint64_t total, std::uint64_t count, Rng& rng) {
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(count) * 2);
  for (std::uint64_t j = total - count; j < total; ++j) {
    const auto t = rng.uniform_index(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SplitSpec identity_disjoint_split(const std::vector<std::string>& labels, double fraction,
                                  std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ArgumentError("train fraction must lie in (0, 1)");
  }
  std::vector<std::string> identities(labels.begin(), labels.end());
  std::sort(identities.begin(), identities.end());
  identities.erase(std::unique(identities.begin(), identities.end()), identities.end());
  if (identities.size() < 2) {
    throw DegenerateDataError("identity split needs at least two distinct identities");
  }

  Rng rng(seed, "identity-split");
  rng.shuffle(identities.begin(), identities.end());

  // The epsilon keeps e.g. 0.7 * 10 from flooring to 6 through representation error.
  const auto n_train = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(identities.size()) + 1e-9));
  if (n_train == 0 || n_train == identities.size()) {
    throw DegenerateDataError("train fraction " + std::to_string(fraction) + " of " +
                              std::to_string(identities.size()) +
                              " identities leaves one side empty");
  }

  SplitSpec spec;
  spec.seed = seed;
  spec.train_fraction = fraction;
  spec.train_identities.assign(identities.begin(),
                               identities.begin() + static_cast<std::ptrdiff_t>(n_train));
  spec.test_identities.assign(identities.begin() + static_cast<std::ptrdiff_t>(n_train),
                              identities.end());
  spec.train_rows = rows_for_identities(labels, spec.train_identities);
  spec.test_rows = rows_for_identities(labels, spec.test_identities);
  return spec;
}

std::vector<std::size_t> rows_for_identities(const std::vector<std::string>& labels,
                                             const std::vector<std::string>& identities) {
  std::unordered_set<std::string_view> wanted(identities.begin(), identities.end());
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (wanted.count(labels[i])) rows.push_back(i);
  }
  return rows;
}

std::size_t PairList::genuine_count() const {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [](const Pair& p) { return p.genuine; }));
}

std::size_t PairList::impostor_count() const { return pairs.size() - genuine_count(); }

std::uint64_t count_genuine_pairs(const std::vector<std::string>& labels) {
  std::uint64_t total = 0;
  for (const auto& g : group_rows(labels)) total += choose2(g.size());
  return total;
}

std::uint64_t count_impostor_pairs(const std::vector<std::string>& labels) {
  return choose2(labels.size()) - count_genuine_pairs(labels);
}

PairList all_genuine_pairs(const std::vector<std::string>& labels) {
  PairList out;
  for (const auto& group : group_rows(labels)) {
    for (std::size_t a = 0; a < group.size(); ++a)
      for (std::size_t b = a + 1; b < group.size(); ++b)
        out.pairs.push_back({group[a], group[b], true});
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

PairList sample_impostor_pairs(const std::vector<std::string>& labels, std::size_t count,
                               std::uint64_t seed) {
  PairList out;
  out.seed = seed;
  if (count == 0) return out;
  const std::uint64_t feasible = count_impostor_pairs(labels);
  if (count > feasible) {
    throw ArgumentError("requested " + std::to_string(count) + " impostor pairs but only " +
                        std::to_string(feasible) + " exist");
  }
  Rng rng(seed, "impostor-pairs");
  const std::size_t n = labels.size();

  if (2 * static_cast<std::uint64_t>(count) > feasible) {
    // Dense request: rejection would mostly hit already-drawn pairs, so draw
    // a uniform subset of the enumerated cross pairs instead.
    std::vector<Pair> all;
    all.reserve(static_cast<std::size_t>(feasible));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (labels[i] != labels[j]) all.push_back({i, j, false});
    for (std::size_t k = 0; k < count; ++k) {
      const auto pick = k + static_cast<std::size_t>(rng.uniform_index(all.size() - k));
      std::swap(all[k], all[pick]);
    }
    all.resize(count);
    out.pairs = std::move(all);
  } else {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(count * 2);
    out.pairs.reserve(count);
    while (out.pairs.size() < count) {
      auto i = static_cast<std::size_t>(rng.uniform_index(n));
      auto j = static_cast<std::size_t>(rng.uniform_index(n));
      if (i == j || labels[i] == labels[j]) continue;
      if (i > j) std::swap(i, j);
      if (!seen.insert(static_cast<std::uint64_t>(i) * n + j).second) continue;
      out.pairs.push_back({i, j, false});
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

PairList sample_pairs_capped(const std::vector<std::string>& labels, std::size_t genuine_count,
                             std::size_t impostor_count, std::uint64_t seed) {
  const auto groups = group_rows(labels);
  std::vector<std::uint64_t> offsets;  // cumulative genuine pair counts per group
  offsets.reserve(groups.size() + 1);
  offsets.push_back(0);
  for (const auto& g : groups) offsets.push_back(offsets.back() + choose2(g.size()));
  const std::uint64_t total_genuine = offsets.back();
  if (genuine_count > total_genuine) {
    throw ArgumentError("requested " + std::to_string(genuine_count) + " genuine pairs but only " +
                        std::to_string(total_genuine) + " exist");
  }

  PairList out;
  out.seed = seed;
  Rng rng(seed, "genuine-pairs");
  for (std::uint64_t index : sample_distinct(total_genuine, genuine_count, rng)) {
    const auto g = static_cast<std::size_t>(
        std::upper_bound(offsets.begin(), offsets.end(), index) - offsets.begin() - 1);
    const auto [a, b] = decode_pair(index - offsets[g], groups[g].size());
    out.pairs.push_back({groups[g][a], groups[g][b], true});
  }
  std::sort(out.pairs.begin(), out.pairs.end());

  auto impostors = sample_impostor_pairs(labels, impostor_count, seed);
  out.pairs.insert(out.pairs.end(), impostors.pairs.begin(), impostors.pairs.end());
  return out;
}

}  // namespace embalign
