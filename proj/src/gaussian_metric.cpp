#include "waldgeo/gaussian_metric.hpp"

#include <cmath>

#include "waldgeo/spd.hpp"

namespace waldgeo {

Eigen::MatrixXd covariance_of(const Wald& w) {
  const int n = w.n_leaves();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  s.diagonal().setOnes();
  for (LeafSet comp : w.topology().components()) {
    for (int u = 1; u <= n; ++u) {
      if (!(comp & leaf_bit(u))) continue;
      for (int v = u + 1; v <= n; ++v) {
        if (!(comp & leaf_bit(v))) continue;
        double value = 1.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
          if (w.topology().split(i).separates(u, v)) value *= 1.0 - w.lambda_of(i);
        }
        s(u - 1, v - 1) = s(v - 1, u - 1) = value;
      }
    }
  }
  return s;
}

double extrinsic_cov_distance(const Wald& w1, const Wald& w2) {
  if (w1.n_leaves() != w2.n_leaves()) {
    throw std::invalid_argument("walds must share the leaf set");
  }
  if (w1 == w2) return 0.0;
  return spd::distance(covariance_of(w1), covariance_of(w2));
}

GaussianTreeMetric::GaussianTreeMetric(const Topology& t)
    : topology_(t), sigmas_(split_matrices(t)) {
  if (!t.fully_resolved()) {
    throw std::invalid_argument("metric provider needs a fully resolved topology");
  }
  pendant_.reserve(t.size());
  for (const auto& s : t.splits()) pendant_.push_back(s.is_pendant());
}

Eigen::MatrixXd GaussianTreeMetric::covariance_at(const Eigen::VectorXd& ell) const {
  const int n = topology_.n_leaves();
  Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
  for (int e = 0; e < dimension(); ++e) dist += ell[e] * sigmas_[e];
  return (-dist).array().exp().matrix();
}

Eigen::MatrixXd GaussianTreeMetric::metric(const Eigen::VectorXd& ell) const {
  const int d = dimension();
  Eigen::MatrixXd s = covariance_at(ell);
  Eigen::MatrixXd p = spd::inverse(s);
  std::vector<Eigen::MatrixXd> b(d);
  for (int i = 0; i < d; ++i) b[i] = p * s.cwiseProduct(sigmas_[i]);
  Eigen::MatrixXd g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      g(i, j) = g(j, i) = 0.5 * (b[i] * b[j]).trace();
    }
  }
  return g;
}

std::vector<Eigen::MatrixXd> GaussianTreeMetric::metric_derivative(const Eigen::VectorXd& ell) const {
  const int d = dimension();
  Eigen::MatrixXd s = covariance_at(ell);
  Eigen::MatrixXd p = spd::inverse(s);
  std::vector<Eigen::MatrixXd> a(d), b(d);
  for (int i = 0; i < d; ++i) {
    a[i] = s.cwiseProduct(sigmas_[i]);
    b[i] = p * a[i];
  }
  // d_k g_ij = 1/2 tr(B_k B_i B_j + B_i B_k B_j)
  //          - 1/2 tr(P (A_k o sigma^i) B_j + B_i P (A_k o sigma^j)).
  std::vector<Eigen::MatrixXd> out(d, Eigen::MatrixXd::Zero(d, d));
  std::vector<std::vector<Eigen::MatrixXd>> bb(d, std::vector<Eigen::MatrixXd>(d));
  std::vector<std::vector<Eigen::MatrixXd>> c(d, std::vector<Eigen::MatrixXd>(d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      bb[i][j] = b[i] * b[j];
      c[i][j] = p * a[i].cwiseProduct(sigmas_[j]);
    }
  }
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j <= i; ++j) {
        double value = 0.5 * ((bb[k][i] * b[j]).trace() + (bb[i][k] * b[j]).trace()) -
                       0.5 * ((c[k][i] * b[j]).trace() + (b[i] * c[k][j]).trace());
        out[k](i, j) = out[k](j, i) = value;
      }
    }
  }
  return out;
}

std::vector<CoordinateGuard> GaussianTreeMetric::guards() const {
  std::vector<CoordinateGuard> out;
  out.reserve(dimension());
  for (int i = 0; i < dimension(); ++i) {
    out.push_back({0.0, kLengthUpperGuard, pendant_[i]});
  }
  return out;
}

Eigen::VectorXd grad_sq_dist(const Eigen::MatrixXd& s0, const Wald& w, Parametrization param) {
  spd::require_spd(s0, "grad_sq_dist target");
  const int d = static_cast<int>(w.size());
  Eigen::MatrixXd s = covariance_of(w);
  Eigen::MatrixXd root0 = spd::sqrt(s0);
  Eigen::MatrixXd root0_inv = spd::inverse_sqrt(s0);
  Eigen::MatrixXd l = spd::log(root0_inv * s * root0_inv);
  Eigen::MatrixXd q = root0_inv * l * root0 * spd::inverse(s);
  auto sigmas = split_matrices(w.topology());
  Eigen::VectorXd grad(d);
  for (int i = 0; i < d; ++i) {
    grad[i] = -(q * s.cwiseProduct(sigmas[i])).trace();
    if (param == Parametrization::kLambda) grad[i] /= 1.0 - w.lambda_of(i);
  }
  return grad;
}

}  // namespace waldgeo
