#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "waldgeo/wald.hpp"

namespace waldgeo {

// Characters are bit vectors over the leaves: bit u-1 of the index holds
// the letter at leaf u, so index and bit pattern coincide (little-endian
// in leaf order).
using Character = std::uint64_t;

inline int character_letter(Character s, int leaf) {
  return (s >> (leaf - 1)) & 1;
}

std::string character_bits(Character s, int n_leaves);

// Probability mass function on {0,1}^N; entries are strictly positive,
// sum to one and obey the complement symmetry p(s) = p(~s).
class CharacterDistribution {
 public:
  CharacterDistribution(std::vector<double> probs, int n_leaves);

  int n_leaves() const { return n_leaves_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](Character s) const { return probs_[s]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
  int n_leaves_;
};

inline constexpr int kDistributionCap = 16;

// Felsenstein pruning over the components of a topology, parametrized by
// mu = exp(-ell) per split so the recursion stays finite at both
// boundaries.  Derivatives are exact: the mass function is multilinear in
// the mu variables.
class PruningEngine {
 public:
  explicit PruningEngine(const Topology& t);

  const Topology& topology() const { return topology_; }

  double prob(Character s, const std::vector<double>& mu) const;

  // d p / d ell^e; the recursion is re-rooted at an endpoint of the edge.
  double grad_ell(Character s, const std::vector<double>& mu, int split) const;

  // d^2 p / (d ell^e1 d ell^e2), symmetric in its arguments.
  double hess_ell(Character s, const std::vector<double>& mu, int e1, int e2) const;

 private:
  struct Override {
    int split = -1;
    double value = 0.0;
  };
  double component_prob(int comp, Character s, const std::vector<double>& mu,
                        Override o1 = Override{-1, 0.0}, Override o2 = Override{-1, 0.0}) const;
  double component_grad(int comp, Character s, const std::vector<double>& mu, int split) const;
  void conditionals(int comp, int root, Character s, const std::vector<double>& mu,
                    const Override& o1, const Override& o2,
                    std::vector<double>& cond0, std::vector<double>& cond1) const;

  Topology topology_;
  std::vector<ComponentTree> trees_;
  std::vector<int> component_of_split_;
};

struct FisherMatrix {
  Eigen::MatrixXd g;
  Parametrization param = Parametrization::kLength;
};

double char_prob(const Wald& w, Character s);
double char_prob_grad(const Wald& w, Character s, int split,
                      Parametrization param = Parametrization::kLength);
double char_prob_hess(const Wald& w, Character s, int e1, int e2,
                      Parametrization param = Parametrization::kLength);

// All 2^N probabilities; p(s) = p(~s) halves the evaluations.
CharacterDistribution full_distribution(const Wald& w, int cap = kDistributionCap);

// i.i.d. draws: the root letter of each component is Bernoulli(1/2) and
// flips propagate edge by edge with probability lambda/2.
std::vector<Character> simulate_characters(const Wald& w, int count, std::mt19937_64& rng);
std::vector<Character> simulate_characters(const Wald& w, int count, std::uint64_t seed);

// g_ij = sum_s (d_i p)(d_j p)/p over all characters; requires a fully
// resolved tree with all weights strictly inside (0,1).
FisherMatrix fisher_info(const Wald& w, Parametrization param = Parametrization::kLength,
                         int cap = kDistributionCap);

enum class FDivergence { kKl, kReverseKl, kJsSquared, kHellingerSquared };

// D_f(p;q) = sum_s q(s) f(p(s)/q(s)).
double f_divergence(const CharacterDistribution& p, const CharacterDistribution& q,
                    FDivergence f);

enum class ProbMetric { kJs, kHellinger };

// Pullback of the Jensen-Shannon / Hellinger metric through the character
// distributions of two walds on the same leaves.
double extrinsic_distance(const Wald& w1, const Wald& w2, ProbMetric metric,
                          int cap = kDistributionCap);

}  // namespace waldgeo
