#include "embalign/verif_eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "embalign/errors.hpp"
#include "embalign/parallel.hpp"
#include "protocol.hpp"

namespace embalign {

namespace {

double row_cosine(const Matrix& a, std::size_t i, const Matrix& b, std::size_t j,
                  const Vector& norm_a, const Vector& norm_b) {
  const double dot = a.row(static_cast<Eigen::Index>(i)).dot(b.row(static_cast<Eigen::Index>(j)));
  const double c = dot / (norm_a(static_cast<Eigen::Index>(i)) * norm_b(static_cast<Eigen::Index>(j)));
  return std::clamp(c, -1.0, 1.0);
}

Vector checked_row_norms(const Matrix& m) {
  Vector norms = m.rowwise().norm();
  for (Eigen::Index i = 0; i < norms.size(); ++i) {
    if (!(norms(i) > 0.0)) throw DegenerateRowError(static_cast<std::size_t>(i));
  }
  return norms;
}

void check_roc(const std::vector<RocPoint>& roc) {
  if (roc.size() < 2) throw ArgumentError("ROC summary needs at least two points");
}

// Curve with (0, 0) and (1, 1) endpoints guaranteed.
std::vector<RocPoint> extended(const std::vector<RocPoint>& roc) {
  std::vector<RocPoint> out;
  out.reserve(roc.size() + 2);
  if (roc.front().fmr > 0.0 || roc.front().tmr > 0.0) out.push_back({0.0, 0.0});
  out.insert(out.end(), roc.begin(), roc.end());
  if (roc.back().fmr < 1.0 || roc.back().tmr < 1.0) out.push_back({1.0, 1.0});
  return out;
}

double interpolate_tmr(const std::vector<RocPoint>& roc, double target) {
  // Last point with fmr <= target carries the best TMR there (curve is
  // monotone in both coordinates).
  std::size_t last = roc.size();
  for (std::size_t i = 0; i < roc.size(); ++i) {
    if (roc[i].fmr <= target) last = i;
  }
  if (last == roc.size()) return 0.0;
  const RocPoint& p0 = roc[last];
  if (p0.fmr == target || last + 1 == roc.size()) return p0.tmr;
  const RocPoint& p1 = roc[last + 1];
  const double t = (target - p0.fmr) / (p1.fmr - p0.fmr);
  return p0.tmr + t * (p1.tmr - p0.tmr);
}

FitOptions fit_options(const VerificationConfig& config, const EmbeddingSet& source,
                       const EmbeddingSet& target, std::uint64_t seed) {
  FitOptions options;
  options.method = config.method;
  options.alpha = config.alpha;
  options.source_model = source.model_name();
  options.target_model = target.model_name();
  options.seed = static_cast<std::int64_t>(seed);
  return options;
}

}  // namespace

PairScores pair_scores(const Matrix& aligned_source, const Matrix& target, const PairList& pairs,
                       bool symmetric) {
  if (aligned_source.cols() != target.cols()) {
    throw ConsistencyError("pair_scores: source and target widths differ");
  }
  PairScores out;
  if (pairs.pairs.empty()) return out;
  const auto n_src = static_cast<std::size_t>(aligned_source.rows());
  const auto n_tgt = static_cast<std::size_t>(target.rows());
  for (const auto& p : pairs.pairs) {
    const bool in_range = symmetric ? (std::max(p.first, p.second) < std::min(n_src, n_tgt))
                                    : (p.first < n_src && p.second < n_tgt);
    if (!in_range) {
      throw ConsistencyError("pair (" + std::to_string(p.first) + ", " + std::to_string(p.second) +
                             ") is out of range");
    }
  }
  const Vector norm_src = checked_row_norms(aligned_source);
  const Vector norm_tgt = checked_row_norms(target);
  out.scores.reserve(pairs.pairs.size());
  out.genuine.reserve(pairs.pairs.size());
  for (const auto& p : pairs.pairs) {
    double s = row_cosine(aligned_source, p.first, target, p.second, norm_src, norm_tgt);
    if (symmetric) {
      s = 0.5 * (s + row_cosine(aligned_source, p.second, target, p.first, norm_src, norm_tgt));
    }
    out.scores.push_back(s);
    out.genuine.push_back(p.genuine);
  }
  return out;
}

std::vector<RocPoint> roc_curve(const std::vector<double>& scores, const std::vector<bool>& genuine) {
  if (scores.size() != genuine.size()) {
    throw ConsistencyError("roc_curve: score and label counts differ");
  }
  const auto n_gen = static_cast<std::size_t>(std::count(genuine.begin(), genuine.end(), true));
  const std::size_t n_imp = scores.size() - n_gen;
  if (n_gen == 0 || n_imp == 0) {
    throw ProtocolError("roc_curve needs at least one genuine and one impostor score");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<RocPoint> roc;
  roc.push_back({0.0, 0.0});
  std::size_t accepted_gen = 0, accepted_imp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    // Accept the whole block of scores equal to this threshold at once.
    for (; i < order.size() && scores[order[i]] == threshold; ++i) {
      genuine[order[i]] ? ++accepted_gen : ++accepted_imp;
    }
    roc.push_back({static_cast<double>(accepted_imp) / static_cast<double>(n_imp),
                   static_cast<double>(accepted_gen) / static_cast<double>(n_gen)});
  }
  return roc;
}

double auc(const std::vector<RocPoint>& roc) {
  check_roc(roc);
  const auto pts = extended(roc);
  double area = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    area += (pts[i].fmr - pts[i - 1].fmr) * 0.5 * (pts[i].tmr + pts[i - 1].tmr);
  }
  return area;
}

double eer(const std::vector<RocPoint>& roc) {
  check_roc(roc);
  const auto pts = extended(roc);
  // g = fmr - fnmr = fmr + tmr - 1 runs from -1 at (0,0) to +1 at (1,1).
  auto g = [](const RocPoint& p) { return p.fmr + p.tmr - 1.0; };
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double g0 = g(pts[i - 1]);
    const double g1 = g(pts[i]);
    if (g0 == 0.0) return pts[i - 1].fmr;
    if (g0 < 0.0 && g1 >= 0.0) {
      const double t = -g0 / (g1 - g0);
      return pts[i - 1].fmr + t * (pts[i].fmr - pts[i - 1].fmr);
    }
  }
  return pts.back().fmr;
}

double tmr_at_fmr(const std::vector<RocPoint>& roc, double fmr_target) {
  check_roc(roc);
  if (!(fmr_target > 0.0 && fmr_target < 1.0)) {
    throw ArgumentError("tmr_at_fmr: target must lie in (0, 1)");
  }
  return interpolate_tmr(extended(roc), fmr_target);
}

std::vector<double> roc_fmr_grid() {
  std::vector<double> grid(50);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid[k] = std::pow(10.0, -4.0 + 4.0 * static_cast<double>(k) / 49.0);
  }
  grid.back() = 1.0;
  return grid;
}

VerificationMetrics verification_metrics(const PairScores& scores,
                                         const std::vector<double>& fmr_targets) {
  VerificationMetrics m;
  m.roc = roc_curve(scores.scores, scores.genuine);
  m.auc = auc(m.roc);
  m.eer = eer(m.roc);
  for (double t : fmr_targets) m.tmr_at_fmr[t] = tmr_at_fmr(m.roc, t);
  m.n_genuine = static_cast<std::size_t>(std::count(scores.genuine.begin(), scores.genuine.end(), true));
  m.n_impostor = scores.genuine.size() - m.n_genuine;
  return m;
}

VerificationReport aggregate(std::vector<std::uint64_t> seeds,
                             std::vector<VerificationMetrics> per_seed) {
  VerificationReport report;
  report.seeds = std::move(seeds);
  report.per_seed = std::move(per_seed);
  if (report.per_seed.empty()) return report;
  std::vector<double> values;
  auto collect = [&](auto&& get) {
    values.clear();
    for (const auto& m : report.per_seed) values.push_back(get(m));
    return summarize(values);
  };
  report.auc = collect([](const VerificationMetrics& m) { return m.auc; });
  report.eer = collect([](const VerificationMetrics& m) { return m.eer; });
  for (const auto& [t, v] : report.per_seed.front().tmr_at_fmr) {
    report.tmr_at_fmr[t] = collect([t = t](const VerificationMetrics& m) { return m.tmr_at_fmr.at(t); });
  }
  for (double f : roc_fmr_grid()) {
    report.mean_roc.push_back(
        {f, collect([f](const VerificationMetrics& m) { return interpolate_tmr(extended(m.roc), f); })});
  }
  return report;
}

VerificationResult evaluate_verification(const EmbeddingSet& source, const EmbeddingSet& target,
                                         const VerificationConfig& config) {
  if (config.seeds.empty()) throw ArgumentError("at least one seed is required");
  detail::require_paired(source, target);

  const std::size_t n_seeds = config.seeds.size();
  std::vector<VerificationMetrics> aligned(n_seeds), baseline(n_seeds);
  parallel_for(config.jobs, n_seeds, [&](std::size_t s) {
    const auto seed = config.seeds[s];
    const SplitSpec split = identity_disjoint_split(source.labels(), config.train_fraction, seed);
    const auto views = detail::prepare_views(
        source.to_matrix(split.train_rows), target.to_matrix(split.train_rows),
        source.to_matrix(split.test_rows), target.to_matrix(split.test_rows),
        fit_options(config, source, target, seed));
    const auto labels = detail::select_labels(source.labels(), split.test_rows);

    PairList pairs = all_genuine_pairs(labels);
    const auto impostors = sample_impostor_pairs(labels, pairs.pairs.size(), seed);
    pairs.pairs.insert(pairs.pairs.end(), impostors.pairs.begin(), impostors.pairs.end());
    pairs.seed = seed;

    aligned[s] = verification_metrics(
        pair_scores(views.aligned_queries, views.gallery, pairs, config.symmetric_score),
        config.fmr_targets);
    baseline[s] = verification_metrics(
        pair_scores(views.baseline_queries, views.baseline_gallery, pairs, config.symmetric_score),
        config.fmr_targets);
  });

  VerificationResult result;
  result.protocol = "intra-dataset";
  result.source_model = source.model_name();
  result.target_model = target.model_name();
  result.config = config;
  result.aligned = aggregate(config.seeds, std::move(aligned));
  result.baseline = aggregate(config.seeds, std::move(baseline));
  return result;
}

VerificationResult evaluate_verification_cross(const EmbeddingSet& train_source,
                                               const EmbeddingSet& train_target,
                                               const EmbeddingSet& eval_source,
                                               const EmbeddingSet& eval_target,
                                               const VerificationConfig& config) {
  if (config.seeds.empty()) throw ArgumentError("at least one seed is required");
  detail::require_paired(train_source, train_target);
  detail::require_paired(eval_source, eval_target);

  const auto views = detail::prepare_views(
      train_source.to_matrix(), train_target.to_matrix(), eval_source.to_matrix(),
      eval_target.to_matrix(), fit_options(config, train_source, train_target, config.seeds.front()));
  const auto& labels = eval_source.labels();
  const auto genuine = static_cast<std::size_t>(
      std::min<std::uint64_t>(config.genuine_cap, count_genuine_pairs(labels)));
  const auto impostor = static_cast<std::size_t>(
      std::min<std::uint64_t>(config.impostor_cap, count_impostor_pairs(labels)));

  const std::size_t n_seeds = config.seeds.size();
  std::vector<VerificationMetrics> aligned(n_seeds), baseline(n_seeds);
  parallel_for(config.jobs, n_seeds, [&](std::size_t s) {
    const auto pairs = sample_pairs_capped(labels, genuine, impostor, config.seeds[s]);
    aligned[s] = verification_metrics(
        pair_scores(views.aligned_queries, views.gallery, pairs, config.symmetric_score),
        config.fmr_targets);
    baseline[s] = verification_metrics(
        pair_scores(views.baseline_queries, views.baseline_gallery, pairs, config.symmetric_score),
        config.fmr_targets);
  });

  VerificationResult result;
  result.protocol = "cross-dataset";
  result.source_model = train_source.model_name();
  result.target_model = train_target.model_name();
  result.config = config;
  result.aligned = aggregate(config.seeds, std::move(aligned));
  result.baseline = aggregate(config.seeds, std::move(baseline));
  return result;
}

}  // namespace embalign
