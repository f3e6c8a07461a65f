#pragma once

#include <memory>

#include "waldgeo/metric_provider.hpp"
#include "waldgeo/wald.hpp"

namespace waldgeo {

// Length value treated as the saturation guard for length-chart providers:
// beyond it the metric is numerically indistinguishable from the boundary
// at infinity.
inline constexpr double kLengthUpperGuard = 12.0;

// S_uv = prod_e (1 - lambda^e)^{sigma^e_uv} = exp(-ell_uv); unit diagonal,
// exact zeros across components.
Eigen::MatrixXd covariance_of(const Wald& w);

// d_cov(S_{w1}, S_{w2}).
double extrinsic_cov_distance(const Wald& w1, const Wald& w2);

// Trace-form Fisher metric of the zero-mean Gaussian tree process in the
// length chart: g_ij(ell) = 1/2 tr(S^-1 (S o sigma^i) S^-1 (S o sigma^j)),
// with algebraic derivatives from d_k S = -(S o sigma^k).  Coordinates
// follow the topology's split order (pendant splits first).
class GaussianTreeMetric final : public MetricProvider {
 public:
  explicit GaussianTreeMetric(const Topology& t);

  int dimension() const override { return static_cast<int>(sigmas_.size()); }
  Eigen::MatrixXd metric(const Eigen::VectorXd& ell) const override;
  std::vector<Eigen::MatrixXd> metric_derivative(const Eigen::VectorXd& ell) const override;
  std::vector<CoordinateGuard> guards() const override;

  Eigen::MatrixXd covariance_at(const Eigen::VectorXd& ell) const;
  const Topology& topology() const { return topology_; }

 private:
  Topology topology_;
  std::vector<Eigen::MatrixXd> sigmas_;
  std::vector<bool> pendant_;
};

// Gradient of ell |-> d_cov(S0, S_ell)^2 on the orthant of w's topology,
// evaluated at w.  The derivative of the covariance is d_i S = -(S o sigma^i),
// giving  d_i = -tr( log(S0^{-1/2} S S0^{-1/2}) S0^{1/2} S^{-1} (S o sigma^i) S0^{-1/2} ).
// Parametrization::kLambda rescales entry i by 1/(1 - lambda_i).
Eigen::VectorXd grad_sq_dist(const Eigen::MatrixXd& s0, const Wald& w,
                             Parametrization param = Parametrization::kLength);

}  // namespace waldgeo
