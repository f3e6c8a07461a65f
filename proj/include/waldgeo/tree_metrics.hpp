#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "waldgeo/wald.hpp"

namespace waldgeo {

// sqrt( sum_{u<v} (ell_uv - ell'_uv)^2 ) over unordered leaf pairs; throws
// on disconnected inputs (infinite path lengths).
double path_difference_distance(const Wald& w1, const Wald& w2);

enum class TreeMetric { kJs, kHellinger, kCov, kBhv, kPathDiff };

const char* to_string(TreeMetric m);
TreeMetric tree_metric_from_string(const std::string& name);

struct DistanceMatrixReport {
  std::vector<TreeMetric> metrics;
  std::vector<Eigen::MatrixXd> matrices;  // NaN marks pairs a metric cannot handle
  // Pearson correlation between the flattened upper triangles; NaN when a
  // metric is degenerate on the sample.
  Eigen::MatrixXd correlations;
};

DistanceMatrixReport compare_metrics(const std::vector<Wald>& trees,
                                     const std::vector<TreeMetric>& metrics,
                                     int cap = 16);

}  // namespace waldgeo
