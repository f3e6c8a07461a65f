#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "waldgeo/common.hpp"

namespace waldgeo {

// Per-coordinate domain bounds.  Clampable coordinates (pendant edges) may
// be pinned at the lower bound during integration instead of stopping.
struct CoordinateGuard {
  double lower = 0.0;
  double upper = kInfinity;
  bool clampable = false;
};

// A Riemannian metric in one coordinate chart.  metric() must return a
// symmetric positive definite matrix inside the guard; metric_derivative()
// defaults to central differences but is overridden by providers with
// algebraic derivatives.  Providers are pure and safe to share.
class MetricProvider {
 public:
  virtual ~MetricProvider() = default;

  virtual int dimension() const = 0;
  virtual Eigen::MatrixXd metric(const Eigen::VectorXd& x) const = 0;

  // dg[k](i,j) = d g_ij / d x_k.
  virtual std::vector<Eigen::MatrixXd> metric_derivative(const Eigen::VectorXd& x) const;

  virtual std::vector<CoordinateGuard> guards() const;

  double fd_step() const { return fd_step_; }
  void set_fd_step(double h) { fd_step_ = h; }

 private:
  double fd_step_ = 1e-5;
};

// Constant Euclidean metric; handy baseline and test fixture.
class EuclideanMetric final : public MetricProvider {
 public:
  explicit EuclideanMetric(int dim) : dim_(dim) {}
  int dimension() const override { return dim_; }
  Eigen::MatrixXd metric(const Eigen::VectorXd&) const override {
    return Eigen::MatrixXd::Identity(dim_, dim_);
  }
  std::vector<Eigen::MatrixXd> metric_derivative(const Eigen::VectorXd&) const override {
    return std::vector<Eigen::MatrixXd>(dim_, Eigen::MatrixXd::Zero(dim_, dim_));
  }
  std::vector<CoordinateGuard> guards() const override {
    return std::vector<CoordinateGuard>(dim_, {-kInfinity, kInfinity, false});
  }

 private:
  int dim_;
};

// View of a length-chart provider in the weight chart lambda = 1 - e^{-ell}.
// The Jacobian d ell / d lambda = 1/(1-lambda) is diagonal, so the metric
// and its derivatives transform coordinate-wise; guards map onto (0,1) with
// the upper face being the boundary at infinity.
class LambdaChart final : public MetricProvider {
 public:
  explicit LambdaChart(std::shared_ptr<const MetricProvider> base) : base_(std::move(base)) {}

  int dimension() const override { return base_->dimension(); }
  Eigen::MatrixXd metric(const Eigen::VectorXd& lambda) const override;
  std::vector<Eigen::MatrixXd> metric_derivative(const Eigen::VectorXd& lambda) const override;
  std::vector<CoordinateGuard> guards() const override;

 private:
  std::shared_ptr<const MetricProvider> base_;
};

}  // namespace waldgeo
