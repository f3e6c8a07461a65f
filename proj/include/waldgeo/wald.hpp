#pragma once

#include <vector>

#include <Eigen/Core>

#include "waldgeo/topology.hpp"

namespace waldgeo {

// A canonical point of the forest space: a topology plus one weight
// lambda in [0,1] per split.  Canonical form guarantees
//   - no internal split carries lambda = 0 (such edges are contracted),
//   - no split carries lambda = 1 (such edges are deleted, splitting
//     the forest into components),
//   - no two leaves of a component are at path length zero.
class Wald {
 public:
  Wald(Topology topology, std::vector<double> lambda);
  Wald() = default;  // the single-leaf forest

  int n_leaves() const { return topology_.n_leaves(); }
  const Topology& topology() const { return topology_; }
  const std::vector<double>& lambda() const { return lambda_; }
  double lambda_of(std::size_t i) const { return lambda_[i]; }
  std::size_t size() const { return lambda_.size(); }

  // Lengths ell = -log(1 - lambda), aligned with topology().splits().
  std::vector<double> lengths() const;

  bool operator==(const Wald& other) const {
    return topology_ == other.topology_ && lambda_ == other.lambda_;
  }

  // ell_uv = sum of edge lengths on the leaf path; +inf across components,
  // zero diagonal.
  Eigen::MatrixXd path_length_matrix() const;

 private:
  Topology topology_;
  std::vector<double> lambda_;
};

}  // namespace waldgeo
