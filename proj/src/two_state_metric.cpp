#include "waldgeo/two_state_metric.hpp"

#include <cmath>

namespace waldgeo {

TwoStateFisherMetric::TwoStateFisherMetric(const Topology& t) : engine_(t) {
  if (!t.fully_resolved()) {
    throw std::invalid_argument("metric provider needs a fully resolved topology");
  }
  if (t.n_leaves() > kDistributionCap) {
    throw std::invalid_argument("leaf count exceeds the distribution cap");
  }
  pendant_.reserve(t.size());
  for (const auto& s : t.splits()) pendant_.push_back(s.is_pendant());
}

Eigen::MatrixXd TwoStateFisherMetric::metric(const Eigen::VectorXd& ell) const {
  const int d = dimension();
  std::vector<double> mu(d);
  for (int i = 0; i < d; ++i) mu[i] = std::exp(-ell[i]);
  const Character count = Character{1} << topology().n_leaves();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd grad(d);
  for (Character s = 0; s < count; ++s) {
    if (s & 1) continue;  // p and its derivatives are complement-symmetric
    double p = engine_.prob(s, mu);
    for (int i = 0; i < d; ++i) grad[i] = engine_.grad_ell(s, mu, i);
    g.selfadjointView<Eigen::Lower>().rankUpdate(grad, 2.0 / p);
  }
  return g.selfadjointView<Eigen::Lower>();
}

std::vector<Eigen::MatrixXd> TwoStateFisherMetric::metric_derivative(
    const Eigen::VectorXd& ell) const {
  const int d = dimension();
  std::vector<double> mu(d);
  for (int i = 0; i < d; ++i) mu[i] = std::exp(-ell[i]);
  const Character count = Character{1} << topology().n_leaves();
  std::vector<Eigen::MatrixXd> out(d, Eigen::MatrixXd::Zero(d, d));
  Eigen::VectorXd grad(d);
  Eigen::MatrixXd hess(d, d);
  for (Character s = 0; s < count; ++s) {
    if (s & 1) continue;
    double p = engine_.prob(s, mu);
    for (int i = 0; i < d; ++i) grad[i] = engine_.grad_ell(s, mu, i);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j <= i; ++j) {
        hess(i, j) = hess(j, i) = engine_.hess_ell(s, mu, i, j);
      }
    }
    // d_k [ (d_i p)(d_j p)/p ]
    //   = (h_ki g_j + g_i h_kj)/p - g_i g_j g_k / p^2, doubled for ~s.
    for (int k = 0; k < d; ++k) {
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j <= i; ++j) {
          double value = (hess(k, i) * grad[j] + grad[i] * hess(k, j)) / p -
                         grad[i] * grad[j] * grad[k] / (p * p);
          out[k](i, j) += 2.0 * value;
        }
      }
    }
  }
  for (int k = 0; k < d; ++k) {
    out[k] = out[k].selfadjointView<Eigen::Lower>();
  }
  return out;
}

std::vector<CoordinateGuard> TwoStateFisherMetric::guards() const {
  std::vector<CoordinateGuard> out;
  out.reserve(dimension());
  for (int i = 0; i < dimension(); ++i) {
    out.push_back({0.0, kLengthUpperGuard, pendant_[i]});
  }
  return out;
}

}  // namespace waldgeo
