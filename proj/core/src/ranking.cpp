#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "embalign/errors.hpp"
#include "embalign/ident_eval.hpp"

namespace embalign {

namespace {

struct InternedLabels {
  std::vector<int> query;
  std::vector<int> gallery;
};

InternedLabels intern(const std::vector<std::string>& query_labels,
                      const std::vector<std::string>& gallery_labels) {
  std::unordered_map<std::string_view, int> ids;
  auto id_of = [&](const std::string& s) {
    auto [it, inserted] = ids.emplace(s, static_cast<int>(ids.size()));
    return it->second;
  };
  InternedLabels out;
  out.gallery.reserve(gallery_labels.size());
  for (const auto& s : gallery_labels) out.gallery.push_back(id_of(s));
  out.query.reserve(query_labels.size());
  for (const auto& s : query_labels) out.query.push_back(id_of(s));
  return out;
}

// 1-based ranks of every relevant gallery item for one query, ascending.
// `exclude` (if < G) is removed from the list before ranking. Ordering is by
// descending score, ties by gallery index; only the relevant items are
// sorted and every other item is binary-searched into that order.
std::vector<std::size_t> relevant_ranks(const std::vector<double>& scores, int query_label,
                                        const std::vector<int>& gallery_labels,
                                        std::size_t exclude, std::vector<std::size_t>& relevant) {
  const std::size_t g = scores.size();
  auto before = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  relevant.clear();
  for (std::size_t j = 0; j < g; ++j) {
    if (j != exclude && gallery_labels[j] == query_label) relevant.push_back(j);
  }
  std::sort(relevant.begin(), relevant.end(), before);
  // ahead[p]: irrelevant items that rank after relevant[p - 1] but before relevant[p].
  std::vector<std::size_t> ahead(relevant.size() + 1, 0);
  for (std::size_t j = 0; j < g; ++j) {
    if (j == exclude || gallery_labels[j] == query_label) continue;
    const auto it = std::partition_point(relevant.begin(), relevant.end(),
                                         [&](std::size_t r) { return before(r, j); });
    ++ahead[static_cast<std::size_t>(it - relevant.begin())];
  }
  std::vector<std::size_t> ranks(relevant.size());
  std::size_t irrelevant_before = 0;
  for (std::size_t i = 0; i < relevant.size(); ++i) {
    irrelevant_before += ahead[i];
    ranks[i] = i + 1 + irrelevant_before;
  }
  return ranks;
}

double average_precision(const std::vector<std::size_t>& ranks) {
  double sum = 0.0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    sum += static_cast<double>(i + 1) / static_cast<double>(ranks[i]);
  }
  return sum / static_cast<double>(ranks.size());
}

void check_label_lengths(const Matrix& scores, const std::vector<std::string>& query_labels,
                         const std::vector<std::string>& gallery_labels) {
  if (static_cast<std::size_t>(scores.rows()) != query_labels.size() ||
      static_cast<std::size_t>(scores.cols()) != gallery_labels.size()) {
    throw ConsistencyError("score matrix is " + std::to_string(scores.rows()) + "x" +
                           std::to_string(scores.cols()) + " but there are " +
                           std::to_string(query_labels.size()) + " query and " +
                           std::to_string(gallery_labels.size()) + " gallery labels");
  }
}

// Per-query relevant ranks over a full score matrix.
std::vector<std::vector<std::size_t>> all_relevant_ranks(
    const Matrix& scores, const std::vector<std::string>& query_labels,
    const std::vector<std::string>& gallery_labels) {
  check_label_lengths(scores, query_labels, gallery_labels);
  const auto labels = intern(query_labels, gallery_labels);
  const auto g = static_cast<std::size_t>(scores.cols());
  std::vector<std::vector<std::size_t>> out(query_labels.size());
  std::vector<double> row(g);
  std::vector<std::size_t> relevant;
  for (std::size_t q = 0; q < query_labels.size(); ++q) {
    for (std::size_t j = 0; j < g; ++j) {
      row[j] = scores(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(j));
    }
    out[q] = relevant_ranks(row, labels.query[q], labels.gallery, g, relevant);
  }
  return out;
}

Matrix normalized_rows(const Matrix& m) {
  Matrix out = m;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (!(norm > 0.0)) throw DegenerateRowError(static_cast<std::size_t>(i));
    out.row(i) /= norm;
  }
  return out;
}

}  // namespace

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

Matrix score_matrix(const Matrix& queries, const Matrix& gallery) {
  if (queries.cols() != gallery.cols()) {
    throw ConsistencyError("score_matrix: query width " + std::to_string(queries.cols()) +
                           " != gallery width " + std::to_string(gallery.cols()));
  }
  const Matrix q = normalized_rows(queries);
  const Matrix g = normalized_rows(gallery);
  Matrix s = q * g.transpose();
  // Rounding can push self-similarity a hair past 1.
  return s.cwiseMax(-1.0).cwiseMin(1.0);
}

double rank_k_accuracy(const Matrix& scores, const std::vector<std::string>& query_labels,
                       const std::vector<std::string>& gallery_labels, std::size_t k) {
  check_label_lengths(scores, query_labels, gallery_labels);
  if (k < 1 || k > static_cast<std::size_t>(scores.cols())) {
    throw ArgumentError("rank_k_accuracy: k must lie in [1, gallery size]");
  }
  if (query_labels.empty()) return 0.0;
  const auto ranks = all_relevant_ranks(scores, query_labels, gallery_labels);
  std::size_t hits = 0;
  for (const auto& r : ranks) hits += (!r.empty() && r.front() <= k) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

double mean_average_precision(const Matrix& scores, const std::vector<std::string>& query_labels,
                              const std::vector<std::string>& gallery_labels) {
  const auto ranks = all_relevant_ranks(scores, query_labels, gallery_labels);
  if (ranks.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t q = 0; q < ranks.size(); ++q) {
    if (ranks[q].empty()) {
      throw ProtocolError("query " + std::to_string(q) + " (label '" + query_labels[q] +
                          "') has no relevant gallery item");
    }
    sum += average_precision(ranks[q]);
  }
  return sum / static_cast<double>(ranks.size());
}

std::vector<double> cmc_curve(const Matrix& scores, const std::vector<std::string>& query_labels,
                              const std::vector<std::string>& gallery_labels,
                              std::size_t max_rank) {
  if (max_rank > static_cast<std::size_t>(scores.cols())) {
    throw ArgumentError("cmc_curve: max_rank " + std::to_string(max_rank) +
                        " exceeds gallery size " + std::to_string(scores.cols()));
  }
  const auto ranks = all_relevant_ranks(scores, query_labels, gallery_labels);
  std::vector<double> curve(max_rank, 0.0);
  if (ranks.empty()) return curve;
  std::vector<std::size_t> first_hit_count(max_rank + 1, 0);
  for (const auto& r : ranks) {
    if (!r.empty() && r.front() <= max_rank) ++first_hit_count[r.front()];
  }
  std::size_t cumulative = 0;
  for (std::size_t k = 1; k <= max_rank; ++k) {
    cumulative += first_hit_count[k];
    curve[k - 1] = static_cast<double>(cumulative) / static_cast<double>(ranks.size());
  }
  return curve;
}

RetrievalMetrics retrieval_metrics(const Matrix& queries, const Matrix& gallery,
                                   const std::vector<std::string>& query_labels,
                                   const std::vector<std::string>& gallery_labels,
                                   const RetrievalOptions& options) {
  if (static_cast<std::size_t>(queries.rows()) != query_labels.size() ||
      static_cast<std::size_t>(gallery.rows()) != gallery_labels.size()) {
    throw ConsistencyError("retrieval_metrics: label count does not match row count");
  }
  if (queries.cols() != gallery.cols()) {
    throw ConsistencyError("retrieval_metrics: query and gallery widths differ");
  }
  if (options.exclude_self && queries.rows() != gallery.rows()) {
    throw ConsistencyError("exclude_self requires queries and gallery to be the same images");
  }
  const auto labels = intern(query_labels, gallery_labels);
  const Matrix gn = normalized_rows(gallery);
  const auto n_q = static_cast<std::size_t>(queries.rows());
  const auto n_g = static_cast<std::size_t>(gallery.rows());
  const std::size_t effective_g = options.exclude_self ? n_g - 1 : n_g;
  if (effective_g == 0) throw ProtocolError("retrieval_metrics: empty gallery");
  const std::size_t max_rank = std::min(options.max_rank, effective_g);

  RetrievalMetrics out;
  out.n_queries = n_q;
  out.n_gallery = effective_g;
  std::vector<std::size_t> first_hit_count(max_rank + 1, 0);
  std::vector<std::size_t> first_hit(n_q, 0);  // 0 = no hit at all
  double ap_sum = 0.0;

  const std::size_t block = std::max<std::size_t>(options.block_rows, 1);
  std::vector<double> row(n_g);
  std::vector<std::size_t> relevant;
  for (std::size_t start = 0; start < n_q; start += block) {
    const std::size_t rows = std::min(block, n_q - start);
    Matrix qb = queries.middleRows(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(rows));
    for (Eigen::Index i = 0; i < qb.rows(); ++i) {
      const double norm = qb.row(i).norm();
      if (!(norm > 0.0)) throw DegenerateRowError(start + static_cast<std::size_t>(i));
      qb.row(i) /= norm;
    }
    const Matrix sb = qb * gn.transpose();
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t q = start + r;
      for (std::size_t j = 0; j < n_g; ++j) {
        row[j] = sb(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j));
      }
      const auto ranks = relevant_ranks(row, labels.query[q], labels.gallery,
                                        options.exclude_self ? q : n_g, relevant);
      if (ranks.empty()) {
        // Only reachable with exclude_self: a singleton identity has no mate
        // once its own image is removed, so it cannot be a closed-set query.
        if (options.exclude_self) {
          ++out.n_skipped;
          continue;
        }
        throw ProtocolError("query " + std::to_string(q) + " (label '" + query_labels[q] +
                            "') has no relevant gallery item");
      }
      first_hit[q] = ranks.front();
      if (ranks.front() <= max_rank) ++first_hit_count[ranks.front()];
      ap_sum += average_precision(ranks);
    }
  }

  const std::size_t evaluated = n_q - out.n_skipped;
  out.n_queries = evaluated;
  if (evaluated == 0) throw ProtocolError("retrieval_metrics: no query has a gallery mate");
  out.cmc.resize(max_rank);
  std::size_t cumulative = 0;
  for (std::size_t k = 1; k <= max_rank; ++k) {
    cumulative += first_hit_count[k];
    out.cmc[k - 1] = static_cast<double>(cumulative) / static_cast<double>(evaluated);
  }
  for (std::size_t k : options.ks) {
    if (k < 1) throw ArgumentError("retrieval_metrics: ranks start at 1");
    // A cutoff past the gallery size sees the whole gallery.
    const std::size_t cutoff = std::min(k, effective_g);
    std::size_t hits = 0;
    for (std::size_t fh : first_hit) hits += (fh >= 1 && fh <= cutoff) ? 1 : 0;
    out.rank_k[k] = static_cast<double>(hits) / static_cast<double>(evaluated);
  }
  out.map_score = ap_sum / static_cast<double>(evaluated);
  return out;
}

RetrievalReport aggregate(std::vector<std::uint64_t> seeds, std::vector<RetrievalMetrics> per_seed) {
  RetrievalReport report;
  report.seeds = std::move(seeds);
  report.per_seed = std::move(per_seed);
  if (report.per_seed.empty()) return report;

  std::vector<double> values;
  auto collect = [&](auto&& get) {
    values.clear();
    for (const auto& m : report.per_seed) values.push_back(get(m));
    return summarize(values);
  };
  for (const auto& [k, v] : report.per_seed.front().rank_k) {
    bool everywhere = std::all_of(report.per_seed.begin(), report.per_seed.end(),
                                  [k = k](const RetrievalMetrics& m) { return m.rank_k.count(k) > 0; });
    if (everywhere) report.rank_k[k] = collect([k = k](const RetrievalMetrics& m) { return m.rank_k.at(k); });
  }
  report.map_score = collect([](const RetrievalMetrics& m) { return m.map_score; });
  std::size_t len = report.per_seed.front().cmc.size();
  for (const auto& m : report.per_seed) len = std::min(len, m.cmc.size());
  for (std::size_t r = 0; r < len; ++r) {
    report.cmc.push_back(collect([r](const RetrievalMetrics& m) { return m.cmc[r]; }));
  }
  return report;
}

}  // namespace embalign
