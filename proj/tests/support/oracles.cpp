#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace oracle {

double mann_whitney_auc(const std::vector<double>& scores, const std::vector<bool>& genuine) {
  double wins = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!genuine[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (genuine[j]) continue;
      total += 1.0;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / total;
}

std::vector<OperatingPoint> enumerate_thresholds(const std::vector<double>& scores,
                                                 const std::vector<bool>& genuine) {
  std::set<double, std::greater<>> distinct(scores.begin(), scores.end());
  std::vector<double> thresholds{std::numeric_limits<double>::infinity()};
  thresholds.insert(thresholds.end(), distinct.begin(), distinct.end());
  thresholds.push_back(-std::numeric_limits<double>::infinity());

  double n_gen = 0, n_imp = 0;
  for (bool g : genuine) (g ? n_gen : n_imp) += 1;
  std::vector<OperatingPoint> out;
  for (double t : thresholds) {
    double acc_gen = 0, acc_imp = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] >= t) (genuine[i] ? acc_gen : acc_imp) += 1;
    }
    out.push_back({acc_imp / n_imp, acc_gen / n_gen});
  }
  return out;
}

double eer_bruteforce(const std::vector<double>& scores, const std::vector<bool>& genuine) {
  const auto pts = enumerate_thresholds(scores, genuine);
  // Segment p + s (q - p) meets fmr + tmr = 1 at
  // s = (1 - p.fmr - p.tmr) / ((q.fmr - p.fmr) + (q.tmr - p.tmr)).
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto& p = pts[i];
    const auto& q = pts[i + 1];
    const double denom = (q.fmr - p.fmr) + (q.tmr - p.tmr);
    if (denom == 0.0) continue;
    const double s = (1.0 - p.fmr - p.tmr) / denom;
    if (s >= 0.0 && s <= 1.0) return p.fmr + s * (q.fmr - p.fmr);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double tmr_at_fmr_bruteforce(const std::vector<double>& scores, const std::vector<bool>& genuine,
                             double target) {
  const auto pts = enumerate_thresholds(scores, genuine);
  double best = 0.0;
  for (const auto& p : pts)
    if (p.fmr <= target) best = std::max(best, p.tmr);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto& p = pts[i];
    const auto& q = pts[i + 1];
    if (p.fmr <= target && target < q.fmr) {
      best = std::max(best, p.tmr + (target - p.fmr) / (q.fmr - p.fmr) * (q.tmr - p.tmr));
    }
  }
  return best;
}

std::vector<std::size_t> ranking(const embalign::Matrix& scores, std::size_t query) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(scores.cols()));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const auto q = static_cast<Eigen::Index>(query);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores(q, static_cast<Eigen::Index>(a)) > scores(q, static_cast<Eigen::Index>(b));
  });
  return idx;
}

double rank_k(const embalign::Matrix& scores, const std::vector<std::string>& query_labels,
              const std::vector<std::string>& gallery_labels, std::size_t k) {
  std::size_t hits = 0;
  for (std::size_t q = 0; q < query_labels.size(); ++q) {
    const auto order = ranking(scores, q);
    for (std::size_t pos = 0; pos < k && pos < order.size(); ++pos) {
      if (gallery_labels[order[pos]] == query_labels[q]) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(query_labels.size());
}

double mean_ap(const embalign::Matrix& scores, const std::vector<std::string>& query_labels,
               const std::vector<std::string>& gallery_labels) {
  double total = 0.0;
  for (std::size_t q = 0; q < query_labels.size(); ++q) {
    const auto order = ranking(scores, q);
    double found = 0.0, sum = 0.0;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      if (gallery_labels[order[pos]] == query_labels[q]) {
        found += 1.0;
        sum += found / static_cast<double>(pos + 1);
      }
    }
    total += sum / found;
  }
  return total / static_cast<double>(query_labels.size());
}

std::vector<OracleMerge> agglomerate(const embalign::Matrix& dist, Link link) {
  const auto m = static_cast<std::size_t>(dist.rows());
  std::vector<std::set<std::size_t>> clusters;
  for (std::size_t i = 0; i < m; ++i) clusters.push_back({i});
  std::vector<std::vector<double>> d(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      d[i][j] = dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  std::vector<bool> alive(m, true);

  std::vector<OracleMerge> merges;
  for (std::size_t step = 0; step + 1 < m; ++step) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (alive[i] && alive[j] && d[i][j] < best) {
          best = d[i][j];
          bi = i;
          bj = j;
        }
    merges.push_back({clusters[bi], clusters[bj], best});
    const double ni = static_cast<double>(clusters[bi].size());
    const double nj = static_cast<double>(clusters[bj].size());
    for (std::size_t k = 0; k < m; ++k) {
      if (!alive[k] || k == bi || k == bj) continue;
      double v = 0.0;
      switch (link) {
        case Link::Average: v = (ni * d[bi][k] + nj * d[bj][k]) / (ni + nj); break;
        case Link::Single: v = std::min(d[bi][k], d[bj][k]); break;
        case Link::Complete: v = std::max(d[bi][k], d[bj][k]); break;
      }
      d[bi][k] = d[k][bi] = v;
    }
    clusters[bi].insert(clusters[bj].begin(), clusters[bj].end());
    alive[bj] = false;
  }
  return merges;
}

double cosine(const embalign::Vector& a, const embalign::Vector& b) {
  double dot = 0, na = 0, nb = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    dot += a(i) * b(i);
    na += a(i) * a(i);
    nb += b(i) * b(i);
  }
  return dot / std::sqrt(na * nb);
}

}  // namespace oracle
