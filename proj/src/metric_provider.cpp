#include "waldgeo/metric_provider.hpp"

namespace waldgeo {

std::vector<Eigen::MatrixXd> MetricProvider::metric_derivative(const Eigen::VectorXd& x) const {
  const int d = dimension();
  const double h = fd_step();
  std::vector<Eigen::MatrixXd> dg(d);
  for (int k = 0; k < d; ++k) {
    Eigen::VectorXd xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    dg[k] = (metric(xp) - metric(xm)) / (2.0 * h);
  }
  return dg;
}

std::vector<CoordinateGuard> MetricProvider::guards() const {
  return std::vector<CoordinateGuard>(dimension(), CoordinateGuard{0.0, kInfinity, false});
}

Eigen::MatrixXd LambdaChart::metric(const Eigen::VectorXd& lambda) const {
  const int d = dimension();
  Eigen::VectorXd ell(d), jac(d);
  for (int i = 0; i < d; ++i) {
    ell[i] = -std::log1p(-lambda[i]);
    jac[i] = 1.0 / (1.0 - lambda[i]);
  }
  Eigen::MatrixXd g = base_->metric(ell);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) *= jac[i] * jac[j];
  }
  return g;
}

std::vector<Eigen::MatrixXd> LambdaChart::metric_derivative(const Eigen::VectorXd& lambda) const {
  const int d = dimension();
  Eigen::VectorXd ell(d), jac(d);
  for (int i = 0; i < d; ++i) {
    ell[i] = -std::log1p(-lambda[i]);
    jac[i] = 1.0 / (1.0 - lambda[i]);
  }
  Eigen::MatrixXd g = base_->metric(ell);
  std::vector<Eigen::MatrixXd> dg_ell = base_->metric_derivative(ell);
  std::vector<Eigen::MatrixXd> out(d, Eigen::MatrixXd::Zero(d, d));
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        double value = jac[i] * jac[j] * jac[k] * dg_ell[k](i, j);
        if (i == k) value += jac[i] * jac[i] * jac[j] * g(i, j);
        if (j == k) value += jac[j] * jac[j] * jac[i] * g(i, j);
        out[k](i, j) = value;
      }
    }
  }
  return out;
}

std::vector<CoordinateGuard> LambdaChart::guards() const {
  std::vector<CoordinateGuard> out = base_->guards();
  for (auto& guard : out) {
    guard.lower = lambda_from_length(std::max(guard.lower, 0.0));
    guard.upper = lambda_from_length(guard.upper);
  }
  return out;
}

}  // namespace waldgeo
