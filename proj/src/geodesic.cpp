#include "waldgeo/geodesic.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace waldgeo {

namespace {

constexpr double kEigenvalueFloor = 1e-12;
constexpr double kConditionLimit = 1e12;
constexpr double kBoundaryTol = 1e-9;

Eigen::MatrixXd inverse_spd(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const auto& ev = es.eigenvalues();
  double lo = ev.minCoeff(), hi = ev.maxCoeff();
  if (!(lo > kEigenvalueFloor)) {
    throw NumericError("metric is numerically singular (eigenvalue " + std::to_string(lo) + ")");
  }
  if (hi / lo > kConditionLimit) {
    throw NumericError("metric condition number exceeds 1e12");
  }
  return es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kReachedTime: return "reached_time";
    case Termination::kHitBhvBoundary: return "hit_bhv_boundary";
    case Termination::kHitInfinityBoundary: return "hit_infinity_boundary";
    case Termination::kPendantClamped: return "pendant_clamped";
  }
  return "unknown";
}

std::vector<Eigen::MatrixXd> christoffel(const MetricProvider& m, const Eigen::VectorXd& x) {
  const int d = m.dimension();
  Eigen::MatrixXd ginv = inverse_spd(m.metric(x));
  std::vector<Eigen::MatrixXd> dg = m.metric_derivative(x);
  std::vector<Eigen::MatrixXd> gamma(d, Eigen::MatrixXd::Zero(d, d));
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j <= i; ++j) {
        double sum = 0.0;
        for (int l = 0; l < d; ++l) {
          sum += ginv(k, l) * (dg[j](l, i) + dg[i](l, j) - dg[l](i, j));
        }
        gamma[k](i, j) = gamma[k](j, i) = 0.5 * sum;
      }
    }
  }
  return gamma;
}

namespace {

struct State {
  Eigen::VectorXd x;
  Eigen::VectorXd v;
  std::uint64_t clamped = 0;
};

// One RK4 step of x' = v, v' = -Gamma(x)(v, v); throws when the metric
// cannot be evaluated along the way.
State rk4_step(const MetricProvider& m, const State& s, double dt) {
  const int d = m.dimension();
  auto accel = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
    auto gamma = christoffel(m, x);
    Eigen::VectorXd a(d);
    for (int k = 0; k < d; ++k) a[k] = -v.dot(gamma[k] * v);
    for (int k = 0; k < d; ++k) {
      if (s.clamped & (std::uint64_t{1} << k)) a[k] = 0.0;
    }
    return a;
  };
  auto vel = [&](Eigen::VectorXd v) {
    for (int k = 0; k < d; ++k) {
      if (s.clamped & (std::uint64_t{1} << k)) v[k] = 0.0;
    }
    return v;
  };

  Eigen::VectorXd k1x = vel(s.v), k1v = accel(s.x, s.v);
  Eigen::VectorXd k2x = vel(s.v + 0.5 * dt * k1v), k2v = accel(s.x + 0.5 * dt * k1x, s.v + 0.5 * dt * k1v);
  Eigen::VectorXd k3x = vel(s.v + 0.5 * dt * k2v), k3v = accel(s.x + 0.5 * dt * k2x, s.v + 0.5 * dt * k2v);
  Eigen::VectorXd k4x = vel(s.v + dt * k3v), k4v = accel(s.x + dt * k3x, s.v + dt * k3v);

  State out;
  out.x = s.x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  out.v = s.v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  out.clamped = s.clamped;
  for (int k = 0; k < d; ++k) {
    if (s.clamped & (std::uint64_t{1} << k)) {
      out.x[k] = s.x[k];
      out.v[k] = 0.0;
    }
  }
  if (!out.x.allFinite() || !out.v.allFinite()) {
    throw NumericError("geodesic state is not finite");
  }
  return out;
}

bool in_bounds(const State& s, const std::vector<CoordinateGuard>& guards) {
  for (int k = 0; k < s.x.size(); ++k) {
    if (s.clamped & (std::uint64_t{1} << k)) continue;
    if (s.x[k] < guards[k].lower || s.x[k] > guards[k].upper) return false;
  }
  return true;
}

double segment_length(const MetricProvider& m, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd mid = 0.5 * (a + b), delta = b - a;
  double q = delta.dot(m.metric(mid) * delta);
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

}  // namespace

GeodesicPath shoot_geodesic(const MetricProvider& m, const Eigen::VectorXd& x0,
                            const Eigen::VectorXd& v0, const ShootOptions& opts) {
  const int d = m.dimension();
  if (x0.size() != d || v0.size() != d) throw std::invalid_argument("dimension mismatch");
  const auto guards = m.guards();
  for (int k = 0; k < d; ++k) {
    if (!(x0[k] > guards[k].lower) || !(x0[k] < guards[k].upper)) {
      throw NumericError("initial point is not interior to the domain guard");
    }
  }

  GeodesicPath path;
  State state{x0, v0, 0};
  double t = 0.0;
  path.samples.push_back({t, state.x, state.v, state.clamped});
  path.cumulative_length.push_back(0.0);
  path.termination = Termination::kReachedTime;

  auto try_step = [&](double dt, State& out) -> bool {
    try {
      out = rk4_step(m, state, dt);
    } catch (const NumericError&) {
      return false;
    }
    return in_bounds(out, guards);
  };

  auto append = [&](double new_t, const State& s) {
    double seg = segment_length(m, path.samples.back().x, s.x);
    path.cumulative_length.push_back(path.cumulative_length.back() + seg);
    path.samples.push_back({new_t, s.x, s.v, s.clamped});
  };

  while (t < opts.max_time - 1e-15) {
    double dt = std::min(opts.step_dt, opts.max_time - t);
    State candidate;
    if (try_step(dt, candidate)) {
      state = candidate;
      t += dt;
      append(t, state);
      continue;
    }
    // A guard was crossed mid-step: bisect the step to the boundary.
    double lo = 0.0, hi = dt;
    State best = state;
    for (int it = 0; it < 60 && hi - lo > 1e-18; ++it) {
      double mid = 0.5 * (lo + hi);
      State trial;
      if (try_step(mid, trial)) {
        lo = mid;
        best = trial;
      } else {
        hi = mid;
      }
    }
    if (lo > 0.0) {
      state = best;
      t += lo;
      append(t, state);
    }
    // Classify the boundary the step ran into.
    std::vector<int> near_lower_stop, near_lower_clamp, near_upper;
    for (int k = 0; k < d; ++k) {
      if (state.clamped & (std::uint64_t{1} << k)) continue;
      if (state.x[k] - guards[k].lower <= kBoundaryTol) {
        (guards[k].clampable ? near_lower_clamp : near_lower_stop).push_back(k);
      } else if (guards[k].upper - state.x[k] <= kBoundaryTol) {
        near_upper.push_back(k);
      }
    }
    if (!near_lower_stop.empty()) {
      path.termination = Termination::kHitBhvBoundary;
      return path;
    }
    if (!near_upper.empty()) {
      path.termination = Termination::kHitInfinityBoundary;
      return path;
    }
    if (!near_lower_clamp.empty()) {
      if (!opts.pendant_clamp) {
        path.termination = Termination::kPendantClamped;
        return path;
      }
      for (int k : near_lower_clamp) {
        state.x[k] = guards[k].lower;
        state.v[k] = 0.0;
        state.clamped |= std::uint64_t{1} << k;
      }
      path.samples.back().x = state.x;
      path.samples.back().v = state.v;
      path.samples.back().clamped = state.clamped;
      continue;
    }
    // No coordinate is near a guard: the metric itself stopped being
    // evaluable (chart saturation on the way to infinity).  Stop there.
    if (lo == 0.0 && t == 0.0) {
      throw NumericError("geodesic step underflow at the initial point");
    }
    path.termination = Termination::kHitInfinityBoundary;
    return path;
  }
  path.termination = Termination::kReachedTime;
  return path;
}

double path_length(const MetricProvider& m, const GeodesicPath& path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.samples.size(); ++i) {
    total += segment_length(m, path.samples[i - 1].x, path.samples[i].x);
  }
  return total;
}

double sectional_curvature(const MetricProvider& m, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                           double fd_step) {
  const int d = m.dimension();
  Eigen::MatrixXd g = m.metric(x);
  double guu = u.dot(g * u), gvv = v.dot(g * v), guv = u.dot(g * v);
  double gram = guu * gvv - guv * guv;
  if (!(gram > 1e-14 * guu * gvv)) {
    throw std::invalid_argument("tangent vectors do not span a plane");
  }

  auto gamma = christoffel(m, x);
  // dGamma[i][l](j,k) = d Gamma^l_jk / d x_i, Richardson-refined central
  // differences of the Christoffel symbols.
  std::vector<std::vector<Eigen::MatrixXd>> dgamma(d);
  for (int i = 0; i < d; ++i) {
    auto diff = [&](double h) {
      Eigen::VectorXd xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      auto gp = christoffel(m, xp);
      auto gm = christoffel(m, xm);
      std::vector<Eigen::MatrixXd> out(d);
      for (int l = 0; l < d; ++l) out[l] = (gp[l] - gm[l]) / (2.0 * h);
      return out;
    };
    auto coarse = diff(fd_step), fine = diff(0.5 * fd_step);
    dgamma[i].resize(d);
    for (int l = 0; l < d; ++l) dgamma[i][l] = (4.0 * fine[l] - coarse[l]) / 3.0;
  }

  // w = R(u, v) v with R^l_kij = d_i Gamma^l_jk - d_j Gamma^l_ik
  //                            + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  for (int l = 0; l < d; ++l) {
    double sum = 0.0;
    for (int k = 0; k < d; ++k) {
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          double r = dgamma[i][l](j, k) - dgamma[j][l](i, k);
          for (int mm = 0; mm < d; ++mm) {
            r += gamma[l](i, mm) * gamma[mm](j, k) - gamma[l](j, mm) * gamma[mm](i, k);
          }
          sum += r * v[k] * u[i] * v[j];
        }
      }
    }
    w[l] = sum;
  }
  return w.dot(g * u) / gram;
}

}  // namespace waldgeo
