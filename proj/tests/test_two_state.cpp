#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "waldgeo/newick.hpp"
#include "waldgeo/random_wald.hpp"
#include "waldgeo/two_state.hpp"

using namespace waldgeo;

namespace {

// Independent oracle: marginalize the Markov field over all internal vertex
// assignments.  p(assignment) = (1/2)^{#components} * prod_edges t(e) with
// t(e) = (1 +/- mu)/2 for equal/unequal endpoint letters.
double brute_force_prob(const ForestGraph& g, Character s) {
  int n_internal = g.n_vertices() - g.n_leaves();
  int n_components = g.n_vertices() - static_cast<int>(g.edges().size());
  double total = 0.0;
  for (Character internal = 0; internal < (Character{1} << n_internal); ++internal) {
    auto letter = [&](int v) -> int {
      if (v < g.n_leaves()) return character_letter(s, v + 1);
      return (internal >> (v - g.n_leaves())) & 1;
    };
    double p = std::pow(0.5, n_components);
    for (const auto& e : g.edges()) {
      double mu = 1.0 - e.lambda;
      p *= letter(e.a) == letter(e.b) ? 0.5 * (1.0 + mu) : 0.5 * (1.0 - mu);
    }
    total += p;
  }
  return total;
}

Wald two_leaf_log2() {
  // single edge with weight exactly 1/2, i.e. length log 2
  return Wald(Topology(2, {Split(leaf_bit(2), all_leaves(2))}), {0.5});
}

}  // namespace

TEST_CASE("two leaf probabilities at ell = log 2") {
  Wald w = two_leaf_log2();
  CHECK(char_prob(w, 0b00) == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(char_prob(w, 0b11) == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(char_prob(w, 0b01) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(char_prob(w, 0b10) == doctest::Approx(0.125).epsilon(1e-14));

  CharacterDistribution dist = full_distribution(w);
  CHECK(dist[0] == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(dist[1] == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(dist[2] == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(dist[3] == doctest::Approx(0.375).epsilon(1e-14));
}

TEST_CASE("pruning matches the brute-force field oracle") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> n_dist(2, 6);
  for (int it = 0; it < 60; ++it) {
    Wald w = random_wald(n_dist(rng), rng);
    ForestGraph g = to_forest_graph(w);
    std::uniform_int_distribution<Character> s_dist(0, (Character{1} << w.n_leaves()) - 1);
    for (int rep = 0; rep < 8; ++rep) {
      Character s = s_dist(rng);
      REQUIRE(char_prob(w, s) == doctest::Approx(brute_force_prob(g, s)).epsilon(1e-12));
    }
  }
}

TEST_CASE("complement symmetry is exact") {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 40; ++it) {
    Wald w = random_wald(2 + it % 6, rng);
    const Character mask = (Character{1} << w.n_leaves()) - 1;
    std::uniform_int_distribution<Character> s_dist(0, mask);
    for (int rep = 0; rep < 8; ++rep) {
      Character s = s_dist(rng);
      REQUIRE(char_prob(w, s) == char_prob(w, ~s & mask));  // bitwise identical
    }
  }
}

TEST_CASE("distributions normalize and stay positive") {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<int> n_dist(2, 8);
  for (int it = 0; it < 50; ++it) {
    Wald w = random_wald(n_dist(rng), rng);
    CharacterDistribution dist = full_distribution(w);  // ctor checks sum and positivity
    double sum = 0.0;
    for (std::size_t s = 0; s < dist.size(); ++s) sum += dist[s];
    REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-13));
  }
  // all-isolated forest: saturation means the uniform distribution
  Wald isolated(Topology(4, {}), {});
  CharacterDistribution u = full_distribution(isolated);
  for (std::size_t s = 0; s < u.size(); ++s) REQUIRE(u[s] == doctest::Approx(1.0 / 16));
  CHECK_THROWS_AS(full_distribution(random_wald(5, std::uint64_t{1}), 4), std::invalid_argument);
}

TEST_CASE("first derivatives") {
  Wald w = two_leaf_log2();
  // d p(00) / d ell = -e^{-ell}/4 = -1/8 at ell = log 2
  CHECK(char_prob_grad(w, 0b00, 0) == doctest::Approx(-0.125).epsilon(1e-14));

  std::mt19937_64 rng(555);
  std::uniform_int_distribution<int> n_dist(2, 6);
  for (int it = 0; it < 100; ++it) {
    Wald w2 = random_wald(n_dist(rng), rng);
    const Character count = Character{1} << w2.n_leaves();
    std::uniform_int_distribution<Character> s_dist(0, count - 1);
    std::uniform_int_distribution<int> e_dist(0, static_cast<int>(w2.size()) - 1);
    Character s = s_dist(rng);
    int e = e_dist(rng);

    // analytic vs central finite difference of char_prob in ell
    double h = 1e-6;
    auto lens = w2.lengths();
    auto prob_at = [&](double ell_e) {
      std::vector<double> lambda(w2.size());
      for (std::size_t i = 0; i < w2.size(); ++i) {
        lambda[i] = lambda_from_length(i == static_cast<std::size_t>(e) ? ell_e : lens[i]);
      }
      return char_prob(Wald(w2.topology(), lambda), s);
    };
    double fd = (prob_at(lens[e] + h) - prob_at(lens[e] - h)) / (2 * h);
    double analytic = char_prob_grad(w2, s, e);
    REQUIRE(analytic == doctest::Approx(fd).epsilon(1e-6));

    // sum over characters of the derivative vanishes (normalization)
    double total = 0.0;
    for (Character c = 0; c < count; ++c) total += char_prob_grad(w2, c, e);
    REQUIRE(std::abs(total) < 1e-12);

    // lambda chart: chain rule factor 1/(1-lambda)
    double lam_grad = char_prob_grad(w2, s, e, Parametrization::kLambda);
    REQUIRE(lam_grad == doctest::Approx(analytic / (1.0 - w2.lambda_of(e))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(char_prob_grad(w, 0b00, 5), std::invalid_argument);
}

TEST_CASE("second derivatives") {
  Wald w = two_leaf_log2();
  // d^2 p(00)/d ell^2 = e^{-ell}/4 = 1/8 at ell = log 2
  CHECK(char_prob_hess(w, 0b00, 0, 0) == doctest::Approx(0.125).epsilon(1e-14));

  std::mt19937_64 rng(777);
  for (int it = 0; it < 60; ++it) {
    Wald w2 = random_wald(2 + it % 5, rng);
    const Character count = Character{1} << w2.n_leaves();
    std::uniform_int_distribution<Character> s_dist(0, count - 1);
    std::uniform_int_distribution<int> e_dist(0, static_cast<int>(w2.size()) - 1);
    Character s = s_dist(rng);
    int e1 = e_dist(rng), e2 = e_dist(rng);

    double h12 = char_prob_hess(w2, s, e1, e2);
    REQUIRE(h12 == char_prob_hess(w2, s, e2, e1));  // symmetry

    // second-order central differences
    double h = 1e-4;
    auto lens = w2.lengths();
    auto prob_at = [&](double d1, double d2) {
      std::vector<double> lambda(w2.size());
      for (std::size_t i = 0; i < w2.size(); ++i) {
        double ell = lens[i];
        if (i == static_cast<std::size_t>(e1)) ell += d1;
        if (i == static_cast<std::size_t>(e2)) ell += d2;
        lambda[i] = lambda_from_length(ell);
      }
      return char_prob(Wald(w2.topology(), lambda), s);
    };
    double fd;
    if (e1 == e2) {
      fd = (prob_at(h, h) - 2 * prob_at(0, 0) + prob_at(-h, -h)) / (4 * h * h);
    } else {
      fd = (prob_at(h, h) - prob_at(h, -h) - prob_at(-h, h) + prob_at(-h, -h)) / (4 * h * h);
    }
    REQUIRE(h12 == doctest::Approx(fd).epsilon(1e-4).scale(0.1));
  }
}

TEST_CASE("simulation moments match lemma 1") {
  std::mt19937_64 rng(20240101);
  Wald w = random_wald(5, rng);
  const int draws = 100000;
  auto sample = simulate_characters(w, draws, std::uint64_t{42});
  auto sample2 = simulate_characters(w, draws, std::uint64_t{42});
  CHECK(sample == sample2);  // deterministic per seed

  Eigen::MatrixXd d = w.path_length_matrix();
  for (int u = 1; u <= 5; ++u) {
    for (int v = u + 1; v <= 5; ++v) {
      double mean_u = 0, mean_v = 0, cross = 0;
      for (Character s : sample) {
        mean_u += character_letter(s, u);
        mean_v += character_letter(s, v);
        cross += character_letter(s, u) * character_letter(s, v);
      }
      mean_u /= draws;
      mean_v /= draws;
      double cov = cross / draws - mean_u * mean_v;
      double expected = 0.25 * std::exp(-d(u - 1, v - 1));
      // 3 sigma of a binomial-style estimator
      double sigma = 0.25 / std::sqrt(static_cast<double>(draws));
      REQUIRE(std::abs(cov - expected) < 3.0 * sigma);
    }
  }

  // independence across components
  Wald split_forest = parse_wald("(1:0.2,2:0.3); (3:0.2,4:0.4)", Parametrization::kLambda);
  auto forest_sample = simulate_characters(split_forest, draws, std::uint64_t{7});
  double cross = 0, m1 = 0, m3 = 0;
  for (Character s : forest_sample) {
    m1 += character_letter(s, 1);
    m3 += character_letter(s, 3);
    cross += character_letter(s, 1) * character_letter(s, 3);
  }
  double corr = cross / draws - (m1 / draws) * (m3 / draws);
  CHECK(std::abs(corr) < 3.0 * 0.25 / std::sqrt(static_cast<double>(draws)));
}

TEST_CASE("exact covariance enumeration matches lemma 1") {
  std::mt19937_64 rng(60601);
  for (int it = 0; it < 25; ++it) {
    Wald w = random_wald(2 + it % 5, rng);
    CharacterDistribution dist = full_distribution(w);
    Eigen::MatrixXd d = w.path_length_matrix();
    for (int u = 1; u <= w.n_leaves(); ++u) {
      for (int v = u + 1; v <= w.n_leaves(); ++v) {
        double cov = 0.0;
        for (std::size_t s = 0; s < dist.size(); ++s) {
          cov += dist[s] * (character_letter(s, u) - 0.5) * (character_letter(s, v) - 0.5);
        }
        REQUIRE(cov == doctest::Approx(0.25 * std::exp(-d(u - 1, v - 1))).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("fisher information") {
  // N=2 closed form: g(ell) = e^{-2l}/(1 - e^{-2l}); g(log 2) = 1/3
  Wald w = two_leaf_log2();
  FisherMatrix fm = fisher_info(w);
  CHECK(fm.g(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));

  // lambda chart differs by (1/(1-lambda))^2
  FisherMatrix fl = fisher_info(w, Parametrization::kLambda);
  CHECK(fl.g(0, 0) == doctest::Approx((1.0 / 3.0) / (0.5 * 0.5)).epsilon(1e-10));

  // symmetric positive definite on random five-leaf trees
  std::mt19937_64 rng(11);
  for (int it = 0; it < 10; ++it) {
    Wald w5 = random_wald(5, rng);
    FisherMatrix f = fisher_info(w5);
    REQUIRE((f.g - f.g.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f.g);
    REQUIRE(es.eigenvalues().minCoeff() > 0.0);
  }

  // quadratic form approximates 2 * KL for small perturbations
  std::mt19937_64 rng2(13);
  Wald w5 = random_wald(5, rng2);
  FisherMatrix f = fisher_info(w5);
  auto lens = w5.lengths();
  Eigen::VectorXd delta(w5.size());
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < delta.size(); ++i) delta[i] = unit(rng2);
  delta *= 1e-3 / delta.norm();
  std::vector<double> lambda(w5.size());
  for (std::size_t i = 0; i < w5.size(); ++i) lambda[i] = lambda_from_length(lens[i] + delta[i]);
  Wald moved(w5.topology(), lambda);
  double quad = delta.dot(f.g * delta);
  double kl2 = 2.0 * f_divergence(full_distribution(moved), full_distribution(w5), FDivergence::kKl);
  CHECK(quad == doctest::Approx(kl2).epsilon(1e-4));

  // degenerate walds are rejected
  CHECK_THROWS_AS(fisher_info(parse_wald("(1:0,2:0.5,3:0.5)")), std::invalid_argument);
}

TEST_CASE("f divergences") {
  CharacterDistribution p({0.5, 0.5}, 1);
  CharacterDistribution q({0.75, 0.25}, 1);
  for (auto f : {FDivergence::kKl, FDivergence::kReverseKl, FDivergence::kJsSquared,
                 FDivergence::kHellingerSquared}) {
    CHECK(f_divergence(p, p, f) == doctest::Approx(0.0).scale(1.0));
  }
  // two-term hand sum: (sqrt(.5)-sqrt(.75))^2 + (sqrt(.5)-sqrt(.25))^2
  double expected = std::pow(std::sqrt(0.5) - std::sqrt(0.75), 2) +
                    std::pow(std::sqrt(0.5) - std::sqrt(0.25), 2);
  CHECK(expected == doctest::Approx(0.06814834742186342).epsilon(1e-14));
  CHECK(f_divergence(q, p, FDivergence::kHellingerSquared) == doctest::Approx(expected));
  CHECK(f_divergence(p, q, FDivergence::kHellingerSquared) == doctest::Approx(expected));

  // KL directions
  double kl = 0.5 * std::log(0.5 / 0.75) + 0.5 * std::log(0.5 / 0.25);
  CHECK(f_divergence(p, q, FDivergence::kKl) == doctest::Approx(kl).epsilon(1e-14));
  CHECK(f_divergence(q, p, FDivergence::kReverseKl) == doctest::Approx(kl).epsilon(1e-14));

  // JS is symmetric
  std::mt19937_64 rng(3);
  for (int it = 0; it < 50; ++it) {
    Wald a = random_wald(4, rng), b = random_wald(4, rng);
    auto da = full_distribution(a), db = full_distribution(b);
    REQUIRE(f_divergence(da, db, FDivergence::kJsSquared) ==
            doctest::Approx(f_divergence(db, da, FDivergence::kJsSquared)).epsilon(1e-12));
  }
}

TEST_CASE("extrinsic probabilistic distances") {
  std::mt19937_64 rng(8);
  Wald w = random_wald(5, rng);
  CHECK(extrinsic_distance(w, w, ProbMetric::kJs) == doctest::Approx(0.0).scale(1.0));
  CHECK(extrinsic_distance(w, w, ProbMetric::kHellinger) == doctest::Approx(0.0).scale(1.0));

  // scaling all lengths up drives probabilistic distances towards zero
  Wald a = random_wald(5, rng), b = random_wald(5, rng);
  double previous = kInfinity;
  for (double c : {1.0, 2.0, 4.0, 8.0}) {
    auto scale = [&](const Wald& x) {
      std::vector<double> lambda(x.size());
      auto lens = x.lengths();
      for (std::size_t i = 0; i < x.size(); ++i) lambda[i] = lambda_from_length(c * lens[i]);
      return Wald(x.topology(), lambda);
    };
    double dist = extrinsic_distance(scale(a), scale(b), ProbMetric::kJs);
    REQUIRE(dist < previous);
    previous = dist;
  }

  // sampled triangle inequality
  for (int it = 0; it < 30; ++it) {
    Wald x = random_wald(4, rng), y = random_wald(4, rng), z = random_wald(4, rng);
    for (auto metric : {ProbMetric::kJs, ProbMetric::kHellinger}) {
      double xy = extrinsic_distance(x, y, metric);
      double yz = extrinsic_distance(y, z, metric);
      double xz = extrinsic_distance(x, z, metric);
      REQUIRE(xz <= xy + yz + 1e-12);
    }
  }

  // injectivity probe: distinct canonical walds are separated
  for (int it = 0; it < 30; ++it) {
    Wald x = random_wald(2 + it % 4, rng), y = random_wald(x.n_leaves(), rng);
    if (x == y) continue;
    auto dx = full_distribution(x), dy = full_distribution(y);
    double max_diff = 0.0;
    for (std::size_t s = 0; s < dx.size(); ++s) {
      max_diff = std::max(max_diff, std::abs(dx[s] - dy[s]));
    }
    REQUIRE(max_diff > 0.0);
  }
}

TEST_CASE("equivalent pre-canonical forests share the distribution") {
  // non-canonical representatives: subdivided edges, weight-1 pruned
  // branches; the canonical wald must induce the same distribution
  // (checked through the independent brute-force field oracle)
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int it = 0; it < 40; ++it) {
    Wald w = random_wald(2 + it % 4, rng);
    ForestGraph g = to_forest_graph(w);
    ForestGraph messy(g.n_leaves());
    for (int v = g.n_leaves(); v < g.n_vertices(); ++v) messy.add_internal_vertex();
    for (const auto& e : g.edges()) {
      if (unit(rng) < 0.5) {
        // subdivide with weights multiplying through 1-l' = (1-a)(1-b)
        double split_point = 0.2 + 0.6 * unit(rng);
        double keep = 1.0 - std::pow(1.0 - e.lambda, split_point);
        double rest = 1.0 - std::pow(1.0 - e.lambda, 1.0 - split_point);
        int mid = messy.add_internal_vertex();
        if (unit(rng) < 0.3) {
          // weight-1 limb: everything behind it is independent and prunable
          int spare = messy.add_internal_vertex();
          int spare2 = messy.add_internal_vertex();
          int spare3 = messy.add_internal_vertex();
          messy.add_edge(mid, spare, 1.0);
          messy.add_edge(spare, spare2, 0.5);
          messy.add_edge(spare, spare3, 0.7);
        }
        messy.add_edge(e.a, mid, keep);
        messy.add_edge(mid, e.b, rest);
      } else {
        messy.add_edge(e.a, e.b, e.lambda);
      }
    }
    Wald canonical = canonicalize(messy);
    REQUIRE(canonical.topology() == w.topology());
    const Character count = Character{1} << w.n_leaves();
    for (Character s = 0; s < count; ++s) {
      REQUIRE(char_prob(canonical, s) ==
              doctest::Approx(brute_force_prob(messy, s)).epsilon(1e-12));
    }
  }
}
