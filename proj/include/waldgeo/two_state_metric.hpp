#pragma once

#include "waldgeo/gaussian_metric.hpp"
#include "waldgeo/metric_provider.hpp"
#include "waldgeo/two_state.hpp"

namespace waldgeo {

// Fisher information metric of the two-state symmetric substitution model in
// the length chart:  g_ij = sum_s (d_i p)(d_j p)/p  with analytic first and
// second character derivatives feeding the metric derivative.  The sum runs
// over all 2^N characters (halved by the complement symmetry), so this is a
// small-N provider.
class TwoStateFisherMetric final : public MetricProvider {
 public:
  explicit TwoStateFisherMetric(const Topology& t);

  int dimension() const override { return static_cast<int>(engine_.topology().size()); }
  Eigen::MatrixXd metric(const Eigen::VectorXd& ell) const override;
  std::vector<Eigen::MatrixXd> metric_derivative(const Eigen::VectorXd& ell) const override;
  std::vector<CoordinateGuard> guards() const override;

  const Topology& topology() const { return engine_.topology(); }

 private:
  PruningEngine engine_;
  std::vector<bool> pendant_;
};

}  // namespace waldgeo
