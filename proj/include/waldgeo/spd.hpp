#pragma once

#include <vector>

#include <Eigen/Core>

#include "waldgeo/common.hpp"

namespace waldgeo::spd {

// All matrix functions go through one symmetric eigendecomposition.
// Eigenvalues at or below 1e-12 raise NumericError: losing rank is a real
// boundary event and must not be papered over.

bool is_spd(const Eigen::MatrixXd& s);
void require_spd(const Eigen::MatrixXd& s, const char* what);

Eigen::MatrixXd sqrt(const Eigen::MatrixXd& s);
Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& s);
Eigen::MatrixXd log(const Eigen::MatrixXd& s);
Eigen::MatrixXd exp(const Eigen::MatrixXd& s);  // of a symmetric matrix
Eigen::MatrixXd inverse(const Eigen::MatrixXd& s);

// d(S1,S2) = sqrt( 1/2 tr log^2( S1^{-1/2} S2 S1^{-1/2} ) ).
double distance(const Eigen::MatrixXd& s1, const Eigen::MatrixXd& s2);

// Point at proportion t along the geodesic:
// S1^{1/2} exp(t log(S1^{-1/2} S2 S1^{-1/2})) S1^{1/2}.
Eigen::MatrixXd geodesic(const Eigen::MatrixXd& s1, const Eigen::MatrixXd& s2, double t);

struct FrechetOptions {
  double tol = 1e-10;  // Frobenius norm of the tangent mean
  int max_iter = 200;
};

// Fixed-point iteration M <- M^{1/2} exp(mean_k log(M^{-1/2} S_k M^{-1/2})) M^{1/2}
// from the arithmetic mean; unique minimizer of sum_k d(M, S_k)^2.
Eigen::MatrixXd frechet_mean(const std::vector<Eigen::MatrixXd>& samples,
                             const FrechetOptions& opts = {});

}  // namespace waldgeo::spd
