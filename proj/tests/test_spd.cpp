#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "waldgeo/gaussian_metric.hpp"
#include "waldgeo/newick.hpp"
#include "waldgeo/random_wald.hpp"
#include "waldgeo/spd.hpp"

using namespace waldgeo;

namespace {

Eigen::MatrixXd random_spd(int n, std::mt19937_64& rng, double spread = 1.0) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = gauss(rng) * spread;
  }
  return a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
}

Eigen::MatrixXd random_invertible(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Eigen::MatrixXd x(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) x(i, j) = gauss(rng);
    }
    if (std::abs(x.determinant()) > 1e-3) return x;
  }
}

}  // namespace

TEST_CASE("matrix function primitives") {
  CHECK(spd::log(Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0).scale(1.0));

  Eigen::MatrixXd d = Eigen::Vector2d(4.0, 9.0).asDiagonal();
  Eigen::MatrixXd r = spd::sqrt(d);
  CHECK(r(0, 0) == doctest::Approx(2.0));
  CHECK(r(1, 1) == doctest::Approx(3.0));

  std::mt19937_64 rng(1);
  for (int it = 0; it < 50; ++it) {
    Eigen::MatrixXd s = random_spd(4, rng);
    Eigen::MatrixXd back = spd::exp(spd::log(s));
    REQUIRE((back - s).norm() / s.norm() < 1e-10);
    Eigen::MatrixXd root = spd::sqrt(s);
    REQUIRE((root * root - s).norm() / s.norm() < 1e-10);
    REQUIRE((spd::inverse_sqrt(s) * root - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-10);
  }

  Eigen::MatrixXd negative = -Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(spd::log(negative), NumericError);
  CHECK_THROWS_AS(spd::sqrt(negative), NumericError);
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(spd::log(asym), NumericError);
}

TEST_CASE("affine-invariant distance") {
  std::mt19937_64 rng(2);
  Eigen::MatrixXd s = random_spd(3, rng);
  CHECK(spd::distance(s, s) == doctest::Approx(0.0).scale(1.0));

  // d(I, cI) = |log c| sqrt(N/2); N=2, c=e^2 gives 2
  Eigen::MatrixXd id2 = Eigen::MatrixXd::Identity(2, 2);
  CHECK(spd::distance(id2, std::exp(2.0) * id2) == doctest::Approx(2.0).epsilon(1e-12));
  Eigen::MatrixXd id5 = Eigen::MatrixXd::Identity(5, 5);
  for (double c : {0.3, 2.0, 11.0}) {
    CHECK(spd::distance(id5, c * id5) ==
          doctest::Approx(std::abs(std::log(c)) * std::sqrt(2.5)).epsilon(1e-12));
  }

  // congruence invariance d(XAX^T, XBX^T) = d(A, B)
  for (int it = 0; it < 30; ++it) {
    Eigen::MatrixXd a = random_spd(4, rng), b = random_spd(4, rng);
    Eigen::MatrixXd x = random_invertible(4, rng);
    double direct = spd::distance(a, b);
    double moved = spd::distance(x * a * x.transpose(), x * b * x.transpose());
    REQUIRE(moved == doctest::Approx(direct).epsilon(1e-10));
  }

  // scaling dependence: d(S, cS) = sqrt(N/2) |log c| for any S
  for (int it = 0; it < 20; ++it) {
    Eigen::MatrixXd a = random_spd(4, rng);
    double c = 0.2 + 3.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    REQUIRE(spd::distance(a, c * a) ==
            doctest::Approx(std::sqrt(2.0) * std::abs(std::log(c))).epsilon(1e-10));
  }

  // metric axioms on random triples
  for (int it = 0; it < 30; ++it) {
    Eigen::MatrixXd a = random_spd(3, rng), b = random_spd(3, rng), c = random_spd(3, rng);
    double ab = spd::distance(a, b), ba = spd::distance(b, a);
    REQUIRE(ab == doctest::Approx(ba).epsilon(1e-12));
    REQUIRE(spd::distance(a, c) <= ab + spd::distance(b, c) + 1e-12);
  }

  Eigen::MatrixXd rank1 = Eigen::MatrixXd::Ones(3, 3);
  CHECK_THROWS_AS(spd::distance(rank1, Eigen::MatrixXd::Identity(3, 3)), NumericError);
}

TEST_CASE("geodesics in the ambient space") {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 20; ++it) {
    Eigen::MatrixXd a = random_spd(4, rng), b = random_spd(4, rng);
    REQUIRE((spd::geodesic(a, b, 0.0) - a).norm() < 1e-10 * a.norm());
    REQUIRE((spd::geodesic(a, b, 1.0) - b).norm() < 1e-10 * b.norm());
    double total = spd::distance(a, b);
    for (double t : {0.25, 0.5, 0.75}) {
      REQUIRE(spd::distance(a, spd::geodesic(a, b, t)) == doctest::Approx(t * total).epsilon(1e-10));
    }
  }

  // midpoint of I and c^2 I is c I
  Eigen::MatrixXd id3 = Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd mid = spd::geodesic(id3, 9.0 * id3, 0.5);
  CHECK((mid - 3.0 * id3).norm() < 1e-10);
}

TEST_CASE("frechet mean") {
  std::mt19937_64 rng(4);
  Eigen::MatrixXd s = random_spd(3, rng);
  Eigen::MatrixXd m = spd::frechet_mean({s, s});
  CHECK((m - s).norm() / s.norm() < 1e-9);

  // {I, c^2 I} has mean c I (the geodesic midpoint)
  Eigen::MatrixXd id3 = Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd mean = spd::frechet_mean({id3, 25.0 * id3});
  CHECK((mean - 5.0 * id3).norm() < 1e-8);

  // first-order optimality: sum_k log(M^{-1/2} S_k M^{-1/2}) ~ 0
  std::vector<Eigen::MatrixXd> sample;
  for (int i = 0; i < 7; ++i) sample.push_back(random_spd(4, rng));
  Eigen::MatrixXd mu = spd::frechet_mean(sample);
  Eigen::MatrixXd root_inv = spd::inverse_sqrt(mu);
  Eigen::MatrixXd tangent = Eigen::MatrixXd::Zero(4, 4);
  for (const auto& x : sample) tangent += spd::log(root_inv * x * root_inv);
  CHECK(tangent.norm() / sample.size() < 1e-9);

  CHECK_THROWS_AS(spd::frechet_mean({}), std::invalid_argument);
  CHECK_THROWS_AS(spd::frechet_mean({id3, 2.0 * id3}, {1e-30, 3}), ConvergenceError);
}

TEST_CASE("wald covariances") {
  // two-leaf tree with total length log 2
  Wald two(Topology(2, {Split(leaf_bit(2), all_leaves(2))}), {0.5});
  Eigen::MatrixXd s = covariance_of(two);
  CHECK(s(0, 0) == 1.0);
  CHECK(s(0, 1) == 0.5);

  // isolated leaves: the identity
  Wald isolated(Topology(3, {}), {});
  CHECK((covariance_of(isolated) - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);

  // unit diagonal, entries in [0,1), zero across components, PD
  std::mt19937_64 rng(55);
  for (int it = 0; it < 200; ++it) {
    Wald w = random_wald(2 + it % 7, rng, {0.01, 0.999999});
    Eigen::MatrixXd cov = covariance_of(w);
    for (int i = 0; i < cov.rows(); ++i) REQUIRE(cov(i, i) == 1.0);
    REQUIRE(cov.minCoeff() >= 0.0);
    REQUIRE(cov.maxCoeff() <= 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    REQUIRE(es.eigenvalues().minCoeff() > 0.0);
  }

  // pre-canonical representatives share the covariance (through newick)
  Wald w = random_wald(5, std::uint64_t{8});
  Wald back = parse_wald(to_newick(w, Parametrization::kLambda), Parametrization::kLambda);
  CHECK((covariance_of(w) - covariance_of(back)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("extrinsic covariance distance") {
  std::mt19937_64 rng(66);
  Wald w = random_wald(5, rng);
  CHECK(extrinsic_cov_distance(w, w) == doctest::Approx(0.0).scale(1.0));

  // two-leaf trees with lengths log 2 and log 4
  Wald a(Topology(2, {Split(leaf_bit(2), all_leaves(2))}), {0.5});
  Wald b(Topology(2, {Split(leaf_bit(2), all_leaves(2))}), {0.75});
  Eigen::MatrixXd sa(2, 2), sb(2, 2);
  sa << 1.0, 0.5, 0.5, 1.0;
  sb << 1.0, 0.25, 0.25, 1.0;
  // whitened eigenvalues (1+-a)/(1+-b): distance from the closed form
  double expected = std::sqrt(0.5 * (std::pow(std::log(1.5 / 1.25), 2) +
                                     std::pow(std::log(0.5 / 0.75), 2)));
  CHECK(extrinsic_cov_distance(a, b) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(spd::distance(sa, sb) == doctest::Approx(expected).epsilon(1e-12));

  // positive on distinct pairs
  for (int it = 0; it < 50; ++it) {
    Wald x = random_wald(4, rng), y = random_wald(4, rng);
    if (x == y) continue;
    REQUIRE(extrinsic_cov_distance(x, y) > 0.0);
  }
}

TEST_CASE("gaussian tree metric closed form and scale invariance") {
  // N=2: g(ell) = rho^2 (1 + rho^2) / (1 - rho^2)^2 with rho = e^{-ell}
  Topology two(2, {Split(leaf_bit(2), all_leaves(2))});
  GaussianTreeMetric m(two);
  for (double ell : {0.3, std::log(2.0), 2.0}) {
    double rho = std::exp(-ell);
    double expected = rho * rho * (1 + rho * rho) / std::pow(1 - rho * rho, 2);
    Eigen::VectorXd x(1);
    x[0] = ell;
    CHECK(m.metric(x)(0, 0) == doctest::Approx(expected).epsilon(1e-12));
  }
  Eigen::VectorXd x(1);
  x[0] = std::log(2.0);
  CHECK(m.metric(x)(0, 0) == doctest::Approx(0.25 * 1.25 / (0.75 * 0.75)).epsilon(1e-12));

  // scaling the covariance has no effect on the metric: the quarter-scaled
  // covariance of the discrete model gives identical entries
  std::mt19937_64 rng(77);
  Wald w = random_wald(5, rng);
  GaussianTreeMetric gm(w.topology());
  Eigen::VectorXd ell = Eigen::Map<const Eigen::VectorXd>(w.lengths().data(), w.size());
  Eigen::MatrixXd s = covariance_of(w);
  Eigen::MatrixXd g = gm.metric(ell);
  auto sigmas = split_matrices(w.topology());
  for (double c : {0.25, 4.0}) {
    Eigen::MatrixXd sc = c * s;
    Eigen::MatrixXd p = spd::inverse(sc);
    Eigen::MatrixXd gc(g.rows(), g.cols());
    for (int i = 0; i < g.rows(); ++i) {
      for (int j = 0; j < g.cols(); ++j) {
        gc(i, j) = 0.5 * (p * sc.cwiseProduct(sigmas[i]) * p * sc.cwiseProduct(sigmas[j])).trace();
      }
    }
    REQUIRE((gc - g).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("gradient of the squared distance") {
  std::mt19937_64 rng(88);
  // at the minimum the gradient vanishes
  Wald w = random_wald(5, rng);
  Eigen::VectorXd at_min = grad_sq_dist(covariance_of(w), w);
  CHECK(at_min.cwiseAbs().maxCoeff() < 1e-10);

  // matches central differences on random targets
  for (int it = 0; it < 100; ++it) {
    Wald tree = random_wald(3 + it % 4, rng);
    Eigen::MatrixXd target = covariance_of(random_wald(tree.n_leaves(), rng));
    Eigen::VectorXd grad = grad_sq_dist(target, tree);
    auto lens = tree.lengths();
    const double h = 1e-6;
    for (std::size_t e = 0; e < tree.size(); ++e) {
      auto dist_at = [&](double ell_e) {
        std::vector<double> lambda(tree.size());
        for (std::size_t i = 0; i < tree.size(); ++i) {
          lambda[i] = lambda_from_length(i == e ? ell_e : lens[i]);
        }
        double d = spd::distance(target, covariance_of(Wald(tree.topology(), lambda)));
        return d * d;
      };
      double fd = (dist_at(lens[e] + h) - dist_at(lens[e] - h)) / (2 * h);
      REQUIRE(grad[e] == doctest::Approx(fd).epsilon(1e-6).scale(0.1));
    }

    // lambda-chart gradient is the length gradient over (1 - lambda)
    Eigen::VectorXd lam_grad = grad_sq_dist(target, tree, Parametrization::kLambda);
    for (std::size_t e = 0; e < tree.size(); ++e) {
      REQUIRE(lam_grad[e] ==
              doctest::Approx(grad[e] / (1.0 - tree.lambda_of(e))).epsilon(1e-12));
    }
  }
}
