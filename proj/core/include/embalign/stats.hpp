#pragma once

#include <vector>

namespace embalign {

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single value
};

MetricSummary summarize(const std::vector<double>& values);

}  // namespace embalign
