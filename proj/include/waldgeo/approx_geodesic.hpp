#pragma once

#include <utility>
#include <vector>

#include "waldgeo/projection.hpp"

namespace waldgeo {

struct ApproxGeodesic {
  std::vector<Wald> points;
  std::vector<double> segment_lengths;  // d_cov between consecutive points
  double total_length = 0.0;
};

struct ConnectOptions {
  int k = 32;
  double resolve_eps = 1e-6;  // internal length used to resolve seed multifurcations
  ProjectionOptions projection;
};

// Iterates i = 1..k-1: step to proportion 1/(k-i+1) along the ambient
// geodesic towards the destination, project back, seed the projection from
// the previous point.  Output has k+1 points with both ends fixed; the
// construction is not symmetric under swapping the end points.
ApproxGeodesic recursive_geodesic(const Wald& w1, const Wald& w2, const ConnectOptions& opts = {});

// Grows the path from both ends at proportions 1/(k-i+1) and 1-1/(k-i+1);
// output is [G_0..G_{k-1}, H_{k-1}..H_0] with 2k points, invariant under
// endpoint swap up to reversal.
ApproxGeodesic symmetrized_geodesic(const Wald& w1, const Wald& w2,
                                    const ConnectOptions& opts = {});

// sum_i d_cov(points_i, points_{i+1}).
double approx_intrinsic_distance(const ApproxGeodesic& g);

// Distances from the fully resolved 4-leaf tree with every weight lambda0
// to the star trees with weight lambda, per grid entry, measured along
// symmetrized approximate geodesics.
std::vector<std::pair<double, double>> star_distance_profile(double lambda0,
                                                             const std::vector<double>& grid,
                                                             const ConnectOptions& opts = {});

// The two fixtures behind the profile.
Wald star_profile_source(double lambda0);  // ((1,2),(3,4)) with all weights lambda0
Wald star_tree(int n_leaves, double lambda);

}  // namespace waldgeo
