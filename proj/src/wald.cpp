#include "waldgeo/wald.hpp"

#include <cmath>
#include <stdexcept>

#include "waldgeo/common.hpp"

namespace waldgeo {

Wald::Wald(Topology topology, std::vector<double> lambda)
    : topology_(std::move(topology)), lambda_(std::move(lambda)) {
  if (lambda_.size() != topology_.size()) {
    throw std::invalid_argument("one weight per split required");
  }
  for (std::size_t i = 0; i < lambda_.size(); ++i) {
    double w = lambda_[i];
    if (!(w >= 0.0 && w <= 1.0)) {
      throw InvalidWaldError("weight out of [0,1]: " + std::to_string(w));
    }
    if (w == 1.0) {
      throw InvalidWaldError("weight-1 split survived canonicalization: " +
                             topology_.split(i).to_string());
    }
    if (w == 0.0 && !topology_.split(i).is_pendant()) {
      throw InvalidWaldError("weight-0 internal split survived canonicalization: " +
                             topology_.split(i).to_string());
    }
  }
  // No two leaves of a component may be at path length zero: every leaf
  // pair needs a separating split of positive weight.
  for (LeafSet comp : topology_.components()) {
    if (popcount(comp) < 2) continue;
    for (int u = 1; u <= n_leaves(); ++u) {
      if (!(comp & leaf_bit(u))) continue;
      for (int v = u + 1; v <= n_leaves(); ++v) {
        if (!(comp & leaf_bit(v))) continue;
        bool separated = false;
        for (std::size_t i = 0; i < topology_.size() && !separated; ++i) {
          separated = lambda_[i] > 0.0 && topology_.split(i).separates(u, v);
        }
        if (!separated) {
          throw InvalidWaldError("leaves " + std::to_string(u) + " and " + std::to_string(v) +
                                 " are coincident");
        }
      }
    }
  }
}

std::vector<double> Wald::lengths() const {
  std::vector<double> out(lambda_.size());
  for (std::size_t i = 0; i < lambda_.size(); ++i) out[i] = length_from_lambda(lambda_[i]);
  return out;
}

Eigen::MatrixXd Wald::path_length_matrix() const {
  const int n = n_leaves();
  Eigen::MatrixXd dist = Eigen::MatrixXd::Constant(n, n, kInfinity);
  dist.diagonal().setZero();
  for (LeafSet comp : topology_.components()) {
    for (int u = 1; u <= n; ++u) {
      if (!(comp & leaf_bit(u))) continue;
      for (int v = u + 1; v <= n; ++v) {
        if (!(comp & leaf_bit(v))) continue;
        double total = 0.0;
        for (std::size_t i = 0; i < topology_.size(); ++i) {
          if (topology_.split(i).separates(u, v)) total += length_from_lambda(lambda_[i]);
        }
        dist(u - 1, v - 1) = dist(v - 1, u - 1) = total;
      }
    }
  }
  return dist;
}

}  // namespace waldgeo
