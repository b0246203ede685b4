#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "embalign/align.hpp"
#include "embalign/embedstore.hpp"
#include "embalign/splits.hpp"
#include "embalign/stats.hpp"
#include "embalign/types.hpp"

namespace embalign {

struct PairScores {
  std::vector<double> scores;
  std::vector<bool> genuine;
};

/// Cosine of (aligned source row i, target row j) for every pair (i, j).
/// With `symmetric`, the mean of both directions is used instead.
PairScores pair_scores(const Matrix& aligned_source, const Matrix& target, const PairList& pairs,
                       bool symmetric = false);

struct RocPoint {
  double fmr = 0.0;
  double tmr = 0.0;
  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

/// Operating points from a threshold sweep over the distinct scores,
/// highest first, bracketed by the +inf point (0, 0) and the -inf point
/// (1, 1). A pair is accepted when score >= threshold. Throws ProtocolError
/// unless both classes are present.
std::vector<RocPoint> roc_curve(const std::vector<double>& scores, const std::vector<bool>& genuine);

/// Trapezoidal area under the curve, extended to (0, 0) and (1, 1).
double auc(const std::vector<RocPoint>& roc);

/// Error rate where FMR = 1 - TMR, interpolated linearly along the curve.
double eer(const std::vector<RocPoint>& roc);

/// Best TMR with FMR <= target, interpolated between the bracketing points.
/// target must lie in (0, 1).
double tmr_at_fmr(const std::vector<RocPoint>& roc, double fmr_target);

/// FMR grid used for averaged ROC output: 50 log-spaced points in [1e-4, 1].
std::vector<double> roc_fmr_grid();

struct VerificationMetrics {
  double auc = 0.0;
  double eer = 0.0;
  std::map<double, double> tmr_at_fmr;
  std::vector<RocPoint> roc;
  std::size_t n_genuine = 0;
  std::size_t n_impostor = 0;
};

VerificationMetrics verification_metrics(const PairScores& scores,
                                         const std::vector<double>& fmr_targets);

struct AveragedRocPoint {
  double fmr = 0.0;
  MetricSummary tmr;
};

struct VerificationReport {
  std::vector<std::uint64_t> seeds;
  std::vector<VerificationMetrics> per_seed;
  MetricSummary auc;
  MetricSummary eer;
  std::map<double, MetricSummary> tmr_at_fmr;
  /// Vertical average of the per-seed curves over roc_fmr_grid().
  std::vector<AveragedRocPoint> mean_roc;
};

VerificationReport aggregate(std::vector<std::uint64_t> seeds,
                             std::vector<VerificationMetrics> per_seed);

struct VerificationConfig {
  Method method = Method::Procrustes;
  double alpha = kDefaultRidgeAlpha;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  double train_fraction = 0.7;
  std::vector<double> fmr_targets{0.01, 0.001};
  bool symmetric_score = false;
  /// Cross-dataset pair caps; clamped to what the evaluation set offers.
  std::size_t genuine_cap = 10000;
  std::size_t impostor_cap = 10000;
  std::size_t jobs = 1;
};

struct VerificationResult {
  std::string protocol;
  std::string source_model;
  std::string target_model;
  VerificationConfig config;
  VerificationReport aligned;
  VerificationReport baseline;
};

/// Intra-dataset protocol: per seed, fit on training identities, then score
/// every genuine pair of the test identities plus as many uniformly drawn
/// impostor pairs.
VerificationResult evaluate_verification(const EmbeddingSet& source, const EmbeddingSet& target,
                                         const VerificationConfig& config);

/// Cross-dataset protocol: fit once on the full training pair; per seed,
/// sample capped genuine and impostor pairs from the evaluation pair.
VerificationResult evaluate_verification_cross(const EmbeddingSet& train_source,
                                               const EmbeddingSet& train_target,
                                               const EmbeddingSet& eval_source,
                                               const EmbeddingSet& eval_target,
                                               const VerificationConfig& config);

}  // namespace embalign
