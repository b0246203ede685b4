#pragma once

// Reference implementations used only by tests. They favour the most direct
// formulation over speed and share no code with the library.

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "embalign/types.hpp"

namespace oracle {

/// P(genuine score > impostor score) + 0.5 P(tie), by counting all pairs.
double mann_whitney_auc(const std::vector<double>& scores, const std::vector<bool>& genuine);

struct OperatingPoint {
  double fmr;
  double tmr;
};

/// One point per candidate threshold: +inf, every distinct score, -inf.
/// Each point recounts accepted pairs from scratch.
std::vector<OperatingPoint> enumerate_thresholds(const std::vector<double>& scores,
                                                 const std::vector<bool>& genuine);

/// FMR at the point where the polyline through the enumerated points meets
/// the line fmr + tmr = 1.
double eer_bruteforce(const std::vector<double>& scores, const std::vector<bool>& genuine);

/// Highest TMR reachable with FMR <= target, including points interpolated
/// on every segment that straddles the target.
double tmr_at_fmr_bruteforce(const std::vector<double>& scores, const std::vector<bool>& genuine,
                             double target);

/// Gallery indices of one score row, best first, ties by index.
std::vector<std::size_t> ranking(const embalign::Matrix& scores, std::size_t query);

double rank_k(const embalign::Matrix& scores, const std::vector<std::string>& query_labels,
              const std::vector<std::string>& gallery_labels, std::size_t k);
double mean_ap(const embalign::Matrix& scores, const std::vector<std::string>& query_labels,
               const std::vector<std::string>& gallery_labels);

enum class Link { Average, Single, Complete };

struct OracleMerge {
  std::set<std::size_t> a;
  std::set<std::size_t> b;
  double height;
};

/// Lance-Williams agglomeration on a distance matrix.
std::vector<OracleMerge> agglomerate(const embalign::Matrix& dist, Link link);

/// Dense cosine similarity computed entry by entry.
double cosine(const embalign::Vector& a, const embalign::Vector& b);

}  // namespace oracle
