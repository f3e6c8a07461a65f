#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>

#include "waldgeo/gaussian_metric.hpp"
#include "waldgeo/geodesic.hpp"
#include "waldgeo/newick.hpp"
#include "waldgeo/random_wald.hpp"
#include "waldgeo/two_state_metric.hpp"

using namespace waldgeo;

namespace {

// Round sphere in polar coordinates: g = diag(1, sin^2 theta), K = 1.
class SphereMetric final : public MetricProvider {
 public:
  int dimension() const override { return 2; }
  Eigen::MatrixXd metric(const Eigen::VectorXd& x) const override {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = std::sin(x[0]) * std::sin(x[0]);
    return g;
  }
  std::vector<CoordinateGuard> guards() const override {
    return {{0.05, 3.09, false}, {-kInfinity, kInfinity, false}};
  }
};

Topology two_leaf_topology() {
  return Topology(2, {Split(leaf_bit(2), all_leaves(2))});
}

}  // namespace

TEST_CASE("christoffel symbols") {
  // constant metric: all symbols vanish
  EuclideanMetric euclid(3);
  auto gamma = christoffel(euclid, Eigen::Vector3d(0.3, -1.0, 2.0));
  for (const auto& m : gamma) CHECK(m.cwiseAbs().maxCoeff() == doctest::Approx(0.0).scale(1.0));

  // one-dimensional two-state metric: g = x/(1-x) with x = e^{-2l}, and
  // Gamma = g'/(2g) = -1/(1 - e^{-2l})
  TwoStateFisherMetric m(two_leaf_topology());
  for (double ell : {0.3, std::log(2.0), 1.5}) {
    Eigen::VectorXd x(1);
    x[0] = ell;
    double expected = -1.0 / (1.0 - std::exp(-2.0 * ell));
    auto g1 = christoffel(m, x);
    CHECK(g1[0](0, 0) == doctest::Approx(expected).epsilon(1e-7));
  }

  // symmetry in the lower indices on random five-leaf trees
  std::mt19937_64 rng(100);
  Wald w = random_wald(5, rng);
  GaussianTreeMetric gm(w.topology());
  Eigen::VectorXd ell = Eigen::Map<const Eigen::VectorXd>(w.lengths().data(), w.size());
  auto gam = christoffel(gm, ell);
  for (const auto& mk : gam) {
    CHECK((mk - mk.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("metric derivative consistency") {
  // analytic derivatives of both tree metrics agree with finite differences
  std::mt19937_64 rng(2717);
  Wald w = random_wald(4, rng);
  Eigen::VectorXd ell = Eigen::Map<const Eigen::VectorXd>(w.lengths().data(), w.size());

  GaussianTreeMetric gm(w.topology());
  auto dg = gm.metric_derivative(ell);
  TwoStateFisherMetric tm(w.topology());
  auto dt = tm.metric_derivative(ell);
  const double h = 1e-6;
  for (int k = 0; k < gm.dimension(); ++k) {
    Eigen::VectorXd xp = ell, xm = ell;
    xp[k] += h;
    xm[k] -= h;
    Eigen::MatrixXd fd_g = (gm.metric(xp) - gm.metric(xm)) / (2 * h);
    Eigen::MatrixXd fd_t = (tm.metric(xp) - tm.metric(xm)) / (2 * h);
    REQUIRE((dg[k] - fd_g).cwiseAbs().maxCoeff() < 1e-6 * std::max(1.0, fd_g.cwiseAbs().maxCoeff()));
    REQUIRE((dt[k] - fd_t).cwiseAbs().maxCoeff() < 1e-6 * std::max(1.0, fd_t.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("shooting basics") {
  EuclideanMetric euclid(2);
  Eigen::Vector2d x0(1.0, 2.0), v0(0.5, -0.25);

  // zero velocity: constant path
  GeodesicPath rest = shoot_geodesic(euclid, x0, Eigen::Vector2d::Zero(), {1e-2, 1.0, true});
  CHECK(rest.termination == Termination::kReachedTime);
  CHECK((rest.back().x - x0).norm() == doctest::Approx(0.0).scale(1.0));
  CHECK(rest.total_length() == doctest::Approx(0.0).scale(1.0));

  // straight line in the flat metric
  GeodesicPath line = shoot_geodesic(euclid, x0, v0, {1e-2, 2.0, true});
  CHECK((line.back().x - (x0 + 2.0 * v0)).norm() < 1e-10);
  CHECK(line.total_length() == doctest::Approx(2.0 * v0.norm()).epsilon(1e-10));
  CHECK(path_length(euclid, line) == doctest::Approx(2.0 * v0.norm()).epsilon(1e-10));

  // time samples strictly increase and lengths accumulate
  for (std::size_t i = 1; i < line.samples.size(); ++i) {
    REQUIRE(line.samples[i].t > line.samples[i - 1].t);
    REQUIRE(line.cumulative_length[i] >= line.cumulative_length[i - 1]);
  }
}

TEST_CASE("geodesic speed is conserved") {
  std::mt19937_64 rng(5150);
  Wald w = random_wald(4, rng);
  GaussianTreeMetric gm(w.topology());
  Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(w.lengths().data(), w.size());
  Eigen::VectorXd v0 = Eigen::VectorXd::Zero(gm.dimension());
  for (int i : w.topology().internal_indices()) v0[i] = 0.4;
  v0[w.topology().internal_indices()[0]] = -0.2;

  GeodesicPath path = shoot_geodesic(gm, x0, v0, {1e-3, 0.5, true});
  double speed0 = std::sqrt(v0.dot(gm.metric(x0) * v0));
  for (const auto& sample : path.samples) {
    double speed = std::sqrt(sample.v.dot(gm.metric(sample.x) * sample.v));
    REQUIRE(std::abs(speed - speed0) / speed0 < 1e-6 * std::max(1.0, sample.t));
  }
}

TEST_CASE("boundary handling") {
  // an internal edge driven to zero stops integration at the boundary
  Wald w = parse_wald("((1:0.5,2:0.5):0.3,3:0.5,(4:0.5,5:0.5):0.4)");
  GaussianTreeMetric gm(w.topology());
  Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(w.lengths().data(), w.size());
  Eigen::VectorXd v0 = Eigen::VectorXd::Zero(gm.dimension());
  auto internals = w.topology().internal_indices();
  v0[internals[0]] = -1.0;
  GeodesicPath path = shoot_geodesic(gm, x0, v0, {1e-3, 5.0, true});
  CHECK(path.termination == Termination::kHitBhvBoundary);
  CHECK(path.back().x[internals[0]] < 1e-8);
  CHECK(path.back().x[internals[0]] >= 0.0);

  // driving a pendant down clamps it at zero and keeps integrating
  Eigen::VectorXd v1 = Eigen::VectorXd::Zero(gm.dimension());
  v1[0] = -1.0;  // pendant of leaf 1
  GeodesicPath clamped = shoot_geodesic(gm, x0, v1, {1e-3, 1.0, true});
  bool saw_clamp = false;
  for (const auto& s : clamped.samples) saw_clamp |= (s.clamped & 1) != 0;
  CHECK(saw_clamp);
  CHECK(clamped.back().x[0] == 0.0);
  CHECK(clamped.back().t > 0.3);  // integration continued past the clamp

  // with clamping off the same shot terminates instead
  GeodesicPath stopped = shoot_geodesic(gm, x0, v1, {1e-3, 1.0, false});
  CHECK(stopped.termination == Termination::kPendantClamped);

  // starting outside the guard is an error
  Eigen::VectorXd bad = x0;
  bad[internals[0]] = -0.1;
  CHECK_THROWS_AS(shoot_geodesic(gm, bad, v0, {1e-3, 1.0, true}), NumericError);
}

TEST_CASE("path length is second order in the step") {
  std::mt19937_64 rng(31);
  Wald w = random_wald(4, rng);
  GaussianTreeMetric gm(w.topology());
  Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(w.lengths().data(), w.size());
  Eigen::VectorXd v0 = Eigen::VectorXd::Random(gm.dimension()) * 0.3;

  double coarse = shoot_geodesic(gm, x0, v0, {4e-3, 0.4, true}).total_length();
  double medium = shoot_geodesic(gm, x0, v0, {2e-3, 0.4, true}).total_length();
  double fine = shoot_geodesic(gm, x0, v0, {1e-3, 0.4, true}).total_length();
  // successive halvings shrink the change by about 4x
  double change1 = std::abs(coarse - medium);
  double change2 = std::abs(medium - fine);
  CHECK(change2 < 0.5 * change1 + 1e-12);
}

TEST_CASE("parametrization invariance of shooting") {
  Wald w = parse_wald("((1:0.4,2:0.45):0.35,3:0.5,(4:0.55,5:0.6):0.3)");
  auto base = std::make_shared<GaussianTreeMetric>(w.topology());
  LambdaChart chart(base);

  Eigen::VectorXd ell0 = Eigen::Map<const Eigen::VectorXd>(w.lengths().data(), w.size());
  Eigen::VectorXd v_ell = Eigen::VectorXd::Zero(base->dimension());
  auto internals = w.topology().internal_indices();
  v_ell[internals[0]] = 0.5;
  v_ell[internals[1]] = 0.2;
  v_ell[0] = -0.1;

  // transform the chart: lambda = 1 - e^{-ell}, d lambda = e^{-ell} d ell
  Eigen::VectorXd lambda0(base->dimension()), v_lambda(base->dimension());
  for (int i = 0; i < base->dimension(); ++i) {
    lambda0[i] = lambda_from_length(ell0[i]);
    v_lambda[i] = std::exp(-ell0[i]) * v_ell[i];
  }

  GeodesicPath in_ell = shoot_geodesic(*base, ell0, v_ell, {1e-3, 0.6, true});
  GeodesicPath in_lambda = shoot_geodesic(chart, lambda0, v_lambda, {1e-3, 0.6, true});

  double t_common = std::min(in_ell.back().t, in_lambda.back().t);
  double sup = 0.0;
  for (std::size_t i = 0; i < in_ell.samples.size() && i < in_lambda.samples.size(); ++i) {
    if (in_ell.samples[i].t > t_common) break;
    for (int k = 0; k < base->dimension(); ++k) {
      sup = std::max(sup,
                     std::abs(lambda_from_length(in_ell.samples[i].x[k]) -
                              in_lambda.samples[i].x[k]));
    }
  }
  CHECK(sup <= 1e-4);
  // and the lengths agree (lengths are chart-independent)
  CHECK(in_ell.cumulative_length[100] == doctest::Approx(in_lambda.cumulative_length[100]).epsilon(1e-6));
}

TEST_CASE("sectional curvature oracles") {
  EuclideanMetric euclid(3);
  Eigen::Vector3d x(0.0, 1.0, 2.0), u(1.0, 0.0, 0.5), v(0.0, 1.0, -0.5);
  CHECK(std::abs(sectional_curvature(euclid, x, u, v)) < 1e-6);

  SphereMetric sphere;
  std::mt19937_64 rng(220);
  std::uniform_real_distribution<double> theta_dist(0.5, 2.5);
  for (int it = 0; it < 5; ++it) {
    Eigen::Vector2d p(theta_dist(rng), theta_dist(rng));
    Eigen::Vector2d e1(1.0, 0.3), e2(-0.2, 1.0);
    CHECK(sectional_curvature(sphere, p, e1, e2) == doctest::Approx(1.0).epsilon(1e-4));
  }

  // degenerate planes are rejected
  CHECK_THROWS_AS(sectional_curvature(euclid, x, u, 2.0 * u), std::invalid_argument);

  // scale invariance: K(au, bv) = K(u, v)
  Eigen::Vector2d p(1.1, 0.7), u2(0.9, -0.1), v2(0.2, 1.4);
  double k0 = sectional_curvature(sphere, p, u2, v2);
  CHECK(sectional_curvature(sphere, p, 3.0 * u2, -2.0 * v2) == doctest::Approx(k0).epsilon(1e-6));
  CHECK(sectional_curvature(sphere, p, v2, u2) == doctest::Approx(k0).epsilon(1e-6));
}

TEST_CASE("two-state and gaussian shoots stay close") {
  // same initial conditions under both models: trajectories agree to a few
  // percent of the travelled length (the full sweep lives in acceptance)
  Wald w = parse_wald("((1:0.5,2:0.5):0.4,3:0.5,(4:0.5,5:0.5):0.4)");
  GaussianTreeMetric gauss(w.topology());
  TwoStateFisherMetric twostate(w.topology());
  Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(w.lengths().data(), w.size());
  Eigen::VectorXd v0 = Eigen::VectorXd::Zero(gauss.dimension());
  auto internals = w.topology().internal_indices();
  v0[internals[0]] = 0.6;
  v0[internals[1]] = -0.3;

  GeodesicPath pg = shoot_geodesic(gauss, x0, v0, {2e-3, 0.5, true});
  GeodesicPath pt = shoot_geodesic(twostate, x0, v0, {2e-3, 0.5, true});
  std::size_t count = std::min(pg.samples.size(), pt.samples.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sup = std::max(sup, (pg.samples[i].x - pt.samples[i].x).cwiseAbs().maxCoeff());
  }
  double travelled = std::min(pg.cumulative_length[count - 1], pt.cumulative_length[count - 1]);
  CHECK(sup <= 0.05 * travelled);
}
