#include "waldgeo/tree_metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "waldgeo/bhv.hpp"
#include "waldgeo/gaussian_metric.hpp"
#include "waldgeo/two_state.hpp"

namespace waldgeo {

double path_difference_distance(const Wald& w1, const Wald& w2) {
  if (w1.n_leaves() != w2.n_leaves()) {
    throw std::invalid_argument("walds must share the leaf set");
  }
  Eigen::MatrixXd d1 = w1.path_length_matrix();
  Eigen::MatrixXd d2 = w2.path_length_matrix();
  double sq = 0.0;
  for (int u = 0; u < d1.rows(); ++u) {
    for (int v = u + 1; v < d1.cols(); ++v) {
      if (std::isinf(d1(u, v)) || std::isinf(d2(u, v))) {
        throw NumericError("path difference undefined for disconnected forests");
      }
      sq += (d1(u, v) - d2(u, v)) * (d1(u, v) - d2(u, v));
    }
  }
  return std::sqrt(sq);
}

const char* to_string(TreeMetric m) {
  switch (m) {
    case TreeMetric::kJs: return "js";
    case TreeMetric::kHellinger: return "hellinger";
    case TreeMetric::kCov: return "cov";
    case TreeMetric::kBhv: return "bhv";
    case TreeMetric::kPathDiff: return "pathdiff";
  }
  return "unknown";
}

TreeMetric tree_metric_from_string(const std::string& name) {
  if (name == "js") return TreeMetric::kJs;
  if (name == "hellinger") return TreeMetric::kHellinger;
  if (name == "cov") return TreeMetric::kCov;
  if (name == "bhv") return TreeMetric::kBhv;
  if (name == "pathdiff") return TreeMetric::kPathDiff;
  throw std::invalid_argument("unknown metric '" + name + "'");
}

DistanceMatrixReport compare_metrics(const std::vector<Wald>& trees,
                                     const std::vector<TreeMetric>& metrics, int cap) {
  if (trees.empty()) throw std::invalid_argument("need at least one tree");
  const int n = static_cast<int>(trees.size());
  for (const auto& w : trees) {
    if (w.n_leaves() != trees.front().n_leaves()) {
      throw std::invalid_argument("trees must share the leaf set");
    }
  }

  auto pair_distance = [&](TreeMetric m, int i, int j) -> double {
    if (trees[i] == trees[j]) return 0.0;
    try {
      switch (m) {
        case TreeMetric::kJs: return extrinsic_distance(trees[i], trees[j], ProbMetric::kJs, cap);
        case TreeMetric::kHellinger:
          return extrinsic_distance(trees[i], trees[j], ProbMetric::kHellinger, cap);
        case TreeMetric::kCov: return extrinsic_cov_distance(trees[i], trees[j]);
        case TreeMetric::kBhv: return bhv_distance(trees[i], trees[j]);
        case TreeMetric::kPathDiff: return path_difference_distance(trees[i], trees[j]);
      }
    } catch (const std::exception&) {
      // the pair is incompatible with this metric (disconnected forest, ...)
    }
    return std::numeric_limits<double>::quiet_NaN();
  };

  DistanceMatrixReport report;
  report.metrics = metrics;
  for (TreeMetric m : metrics) {
    Eigen::MatrixXd matrix = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        matrix(i, j) = matrix(j, i) = pair_distance(m, i, j);
      }
    }
    report.matrices.push_back(std::move(matrix));
  }

  const int k = static_cast<int>(metrics.size());
  report.correlations = Eigen::MatrixXd::Constant(k, k, 1.0);
  auto upper = [&](int m) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) out.push_back(report.matrices[m](i, j));
    }
    return out;
  };
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      std::vector<double> xs = upper(a), ys = upper(b);
      double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
      int count = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::isnan(xs[i]) || std::isnan(ys[i])) continue;
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        syy += ys[i] * ys[i];
        sxy += xs[i] * ys[i];
        ++count;
      }
      double corr = std::numeric_limits<double>::quiet_NaN();
      if (count > 1) {
        double cov = sxy - sx * sy / count;
        double vx = sxx - sx * sx / count;
        double vy = syy - sy * sy / count;
        if (vx > 0.0 && vy > 0.0) corr = cov / std::sqrt(vx * vy);
      }
      report.correlations(a, b) = report.correlations(b, a) = corr;
    }
  }
  return report;
}

}  // namespace waldgeo
