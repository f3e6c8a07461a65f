#pragma once

#include <cstdint>
#include <vector>

#include "waldgeo/metric_provider.hpp"

namespace waldgeo {

enum class Termination {
  kReachedTime,
  kHitBhvBoundary,       // a non-clampable coordinate reached its lower bound
  kHitInfinityBoundary,  // a coordinate reached its upper bound
  kPendantClamped,       // a clampable coordinate hit zero with clamping off
};

const char* to_string(Termination t);

struct GeodesicSample {
  double t = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd v;
  std::uint64_t clamped = 0;  // bit k set when coordinate k is pinned at its bound
};

struct GeodesicPath {
  std::vector<GeodesicSample> samples;
  std::vector<double> cumulative_length;  // aligned with samples
  Termination termination = Termination::kReachedTime;

  double total_length() const {
    return cumulative_length.empty() ? 0.0 : cumulative_length.back();
  }
  const GeodesicSample& back() const { return samples.back(); }
};

// Gamma^k_ij = 1/2 sum_l g^{kl} (d_j g_li + d_i g_lj - d_l g_ij).
// Gamma[k](i,j); throws NumericError when g is numerically singular.
std::vector<Eigen::MatrixXd> christoffel(const MetricProvider& m, const Eigen::VectorXd& x);

struct ShootOptions {
  double step_dt = 1e-3;
  double max_time = 1.0;
  bool pendant_clamp = true;  // pin clampable coordinates at zero and continue
};

// Integrates x'' + Gamma(x)(x',x') = 0 with classic RK4 from (x0, v0).
// Integration stops at max_time, or at a guard: crossings are bisected to
// the boundary within 1e-9.  Clampable coordinates that reach their lower
// bound are frozen there (position and velocity zero) when pendant_clamp
// is set, and the step is marked in the sample's clamp mask.
GeodesicPath shoot_geodesic(const MetricProvider& m, const Eigen::VectorXd& x0,
                            const Eigen::VectorXd& v0, const ShootOptions& opts);

// Sum over segments of sqrt(dx^T g(midpoint) dx).
double path_length(const MetricProvider& m, const GeodesicPath& path);

// Sectional curvature of the plane spanned by u, v; the curvature tensor is
// assembled from Christoffel symbols differentiated by Richardson-refined
// central differences.
double sectional_curvature(const MetricProvider& m, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                           double fd_step = 1e-4);

}  // namespace waldgeo
