#include "waldgeo/two_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace waldgeo {

std::string character_bits(Character s, int n_leaves) {
  std::string out(n_leaves, '0');
  for (int u = 1; u <= n_leaves; ++u) {
    if (character_letter(s, u)) out[u - 1] = '1';
  }
  return out;
}

CharacterDistribution::CharacterDistribution(std::vector<double> probs, int n_leaves)
    : probs_(std::move(probs)), n_leaves_(n_leaves) {
  if (probs_.size() != (std::size_t{1} << n_leaves_)) {
    throw std::invalid_argument("distribution needs 2^N entries");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p > 0.0)) throw std::invalid_argument("character probabilities must be positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("character probabilities must sum to one");
  }
}

PruningEngine::PruningEngine(const Topology& t)
    : topology_(t), trees_(component_trees(t)), component_of_split_(t.size(), -1) {
  for (int c = 0; c < static_cast<int>(trees_.size()); ++c) {
    for (const auto& nbrs : trees_[c].adj) {
      for (auto [nbr, split_index] : nbrs) component_of_split_[split_index] = c;
    }
  }
}

void PruningEngine::conditionals(int comp, int root, Character s, const std::vector<double>& mu,
                                 const Override& o1, const Override& o2,
                                 std::vector<double>& cond0, std::vector<double>& cond1) const {
  const ComponentTree& tree = trees_[comp];
  const int nv = tree.n_vertices();
  cond0.assign(nv, 1.0);
  cond1.assign(nv, 1.0);

  // Post-order from the chosen root.
  std::vector<int> order, parent(nv, -1), stack = {root};
  std::vector<bool> seen(nv, false);
  seen[root] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (auto [nbr, split_index] : tree.adj[v]) {
      if (!seen[nbr]) {
        seen[nbr] = true;
        parent[nbr] = v;
        stack.push_back(nbr);
      }
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (tree.leaf_of[v] != 0) {
      int letter = character_letter(s, tree.leaf_of[v]);
      cond0[v] = letter == 0 ? 1.0 : 0.0;
      cond1[v] = letter == 1 ? 1.0 : 0.0;
    }
    for (auto [child, split_index] : tree.adj[v]) {
      if (parent[child] != v) continue;
      double m = mu[split_index];
      if (split_index == o1.split) m = o1.value;
      if (split_index == o2.split) m = o2.value;
      double f0 = 0.5 * ((1.0 + m) * cond0[child] + (1.0 - m) * cond1[child]);
      double f1 = 0.5 * ((1.0 + m) * cond1[child] + (1.0 - m) * cond0[child]);
      cond0[v] *= f0;
      cond1[v] *= f1;
    }
  }
}

double PruningEngine::component_prob(int comp, Character s, const std::vector<double>& mu,
                                     Override o1, Override o2) const {
  std::vector<double> cond0, cond1;
  conditionals(comp, 0, s, mu, o1, o2, cond0, cond1);
  return 0.5 * (cond0[0] + cond1[0]);
}

double PruningEngine::component_grad(int comp, Character s, const std::vector<double>& mu,
                                     int split) const {
  const ComponentTree& tree = trees_[comp];
  // Root at an endpoint of the edge so the closed-form derivative applies.
  int root = -1, across = -1;
  for (int v = 0; v < tree.n_vertices() && root < 0; ++v) {
    for (auto [nbr, split_index] : tree.adj[v]) {
      if (split_index == split) {
        root = v;
        across = nbr;
        break;
      }
    }
  }
  std::vector<double> cond0, cond1;
  conditionals(comp, root, s, mu, {}, {}, cond0, cond1);

  const double m = mu[split];
  double result = 0.0;
  for (int omega = 0; omega < 2; ++omega) {
    double term;
    if (tree.leaf_of[root] != 0) {
      term = character_letter(s, tree.leaf_of[root]) == omega ? 1.0 : 0.0;
    } else {
      term = 1.0;
    }
    if (term == 0.0) continue;
    const double across_omega = omega == 0 ? cond0[across] : cond1[across];
    const double across_flip = omega == 0 ? cond1[across] : cond0[across];
    term *= 0.5 * m * (across_flip - across_omega);
    for (auto [nbr, split_index] : tree.adj[root]) {
      if (nbr == across) continue;
      double mo = mu[split_index];
      double c_omega = omega == 0 ? cond0[nbr] : cond1[nbr];
      double c_flip = omega == 0 ? cond1[nbr] : cond0[nbr];
      term *= 0.5 * ((1.0 + mo) * c_omega + (1.0 - mo) * c_flip);
    }
    result += term;
  }
  return 0.5 * result;
}

double PruningEngine::prob(Character s, const std::vector<double>& mu) const {
  double p = 1.0;
  for (int c = 0; c < static_cast<int>(trees_.size()); ++c) {
    p *= popcount(trees_[c].leaf_mask) == 1 ? 0.5 : component_prob(c, s, mu);
  }
  return p;
}

double PruningEngine::grad_ell(Character s, const std::vector<double>& mu, int split) const {
  if (split < 0 || split >= static_cast<int>(topology_.size())) {
    throw std::invalid_argument("split index out of range");
  }
  const int comp = component_of_split_[split];
  double result = component_grad(comp, s, mu, split);
  for (int c = 0; c < static_cast<int>(trees_.size()); ++c) {
    if (c == comp) continue;
    result *= popcount(trees_[c].leaf_mask) == 1 ? 0.5 : component_prob(c, s, mu);
  }
  return result;
}

double PruningEngine::hess_ell(Character s, const std::vector<double>& mu, int e1, int e2) const {
  if (e1 < 0 || e2 < 0 || e1 >= static_cast<int>(topology_.size()) ||
      e2 >= static_cast<int>(topology_.size())) {
    throw std::invalid_argument("split index out of range");
  }
  if (e1 == e2) {
    // p is affine in mu^e, so d^2 p / d ell^2 = mu dp/dmu = -dp/dell.
    return -grad_ell(s, mu, e1);
  }
  if (e1 > e2) std::swap(e1, e2);  // bitwise symmetry in the arguments
  const int c1 = component_of_split_[e1];
  const int c2 = component_of_split_[e2];
  double rest = 1.0;
  for (int c = 0; c < static_cast<int>(trees_.size()); ++c) {
    if (c == c1 || c == c2) continue;
    rest *= popcount(trees_[c].leaf_mask) == 1 ? 0.5 : component_prob(c, s, mu);
  }
  if (c1 != c2) {
    return component_grad(c1, s, mu, e1) * component_grad(c2, s, mu, e2) * rest;
  }
  // Bilinearity in (mu^e1, mu^e2) makes the two-point difference exact.
  double p11 = component_prob(c1, s, mu, {e1, 1.0}, {e2, 1.0});
  double p10 = component_prob(c1, s, mu, {e1, 1.0}, {e2, 0.0});
  double p01 = component_prob(c1, s, mu, {e1, 0.0}, {e2, 1.0});
  double p00 = component_prob(c1, s, mu, {e1, 0.0}, {e2, 0.0});
  return mu[e1] * mu[e2] * (p11 - p10 - p01 + p00) * rest;
}

namespace {

std::vector<double> mu_vector(const Wald& w) {
  std::vector<double> mu(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) mu[i] = 1.0 - w.lambda_of(i);
  return mu;
}

void check_character(const Wald& w, Character s) {
  if (w.n_leaves() < kMaxLeaves && (s >> w.n_leaves()) != 0) {
    throw std::invalid_argument("character has more bits than leaves");
  }
}

double lambda_chain_factor(const Wald& w, int split) {
  // d ell / d lambda = 1 / (1 - lambda)
  return 1.0 / (1.0 - w.lambda_of(split));
}

}  // namespace

double char_prob(const Wald& w, Character s) {
  check_character(w, s);
  return PruningEngine(w.topology()).prob(s, mu_vector(w));
}

double char_prob_grad(const Wald& w, Character s, int split, Parametrization param) {
  check_character(w, s);
  double g = PruningEngine(w.topology()).grad_ell(s, mu_vector(w), split);
  if (param == Parametrization::kLambda) g *= lambda_chain_factor(w, split);
  return g;
}

double char_prob_hess(const Wald& w, Character s, int e1, int e2, Parametrization param) {
  check_character(w, s);
  PruningEngine engine(w.topology());
  auto mu = mu_vector(w);
  double h = engine.hess_ell(s, mu, e1, e2);
  if (param == Parametrization::kLambda) {
    // dl/dL = 1/(1-L) and d^2 l/dL^2 = 1/(1-L)^2 with l = ell, L = lambda.
    double j1 = lambda_chain_factor(w, e1), j2 = lambda_chain_factor(w, e2);
    h *= j1 * j2;
    if (e1 == e2) h += engine.grad_ell(s, mu, e1) * j1 * j1;
  }
  return h;
}

CharacterDistribution full_distribution(const Wald& w, int cap) {
  if (w.n_leaves() > cap) {
    throw std::invalid_argument("leaf count exceeds the distribution cap");
  }
  PruningEngine engine(w.topology());
  auto mu = mu_vector(w);
  const Character count = Character{1} << w.n_leaves();
  const Character mask = count - 1;
  std::vector<double> probs(count, 0.0);
  for (Character s = 0; s < count; ++s) {
    if (s & 1) continue;  // p(s) = p(~s): evaluate one representative
    double p = engine.prob(s, mu);
    probs[s] = p;
    probs[~s & mask] = p;
  }
  return CharacterDistribution(std::move(probs), w.n_leaves());
}

std::vector<Character> simulate_characters(const Wald& w, int count, std::mt19937_64& rng) {
  auto trees = component_trees(w.topology());
  std::bernoulli_distribution fair(0.5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Character> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    Character s = 0;
    for (const auto& tree : trees) {
      std::vector<int> letter(tree.n_vertices(), -1);
      letter[0] = fair(rng) ? 1 : 0;
      std::vector<int> stack = {0};
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto [nbr, split_index] : tree.adj[v]) {
          if (letter[nbr] >= 0) continue;
          double flip = 0.5 * w.lambda_of(split_index);
          letter[nbr] = unit(rng) < flip ? 1 - letter[v] : letter[v];
          stack.push_back(nbr);
        }
      }
      for (int v = 0; v < tree.n_vertices(); ++v) {
        if (tree.leaf_of[v] != 0 && letter[v] == 1) s |= leaf_bit(tree.leaf_of[v]);
      }
    }
    out.push_back(s);
  }
  return out;
}

std::vector<Character> simulate_characters(const Wald& w, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return simulate_characters(w, count, rng);
}

FisherMatrix fisher_info(const Wald& w, Parametrization param, int cap) {
  if (!w.topology().fully_resolved()) {
    throw std::invalid_argument("Fisher matrix needs a fully resolved tree");
  }
  for (double l : w.lambda()) {
    if (l <= 0.0 || l >= 1.0) {
      throw std::invalid_argument("Fisher matrix needs weights strictly inside (0,1)");
    }
  }
  if (w.n_leaves() > cap) {
    throw std::invalid_argument("leaf count exceeds the distribution cap");
  }
  PruningEngine engine(w.topology());
  auto mu = mu_vector(w);
  const int d = static_cast<int>(w.size());
  const Character count = Character{1} << w.n_leaves();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd grad(d);
  for (Character s = 0; s < count; ++s) {
    if (s & 1) continue;  // complement symmetry: double one half
    double p = engine.prob(s, mu);
    for (int i = 0; i < d; ++i) grad[i] = engine.grad_ell(s, mu, i);
    g += (2.0 / p) * grad * grad.transpose();
  }
  if (param == Parametrization::kLambda) {
    for (int i = 0; i < d; ++i) {
      double ji = lambda_chain_factor(w, i);
      for (int j = 0; j < d; ++j) g(i, j) *= ji * lambda_chain_factor(w, j);
    }
  }
  return {std::move(g), param};
}

double f_divergence(const CharacterDistribution& p, const CharacterDistribution& q,
                    FDivergence f) {
  if (p.size() != q.size()) throw std::invalid_argument("distribution sizes differ");
  double total = 0.0;
  switch (f) {
    case FDivergence::kKl:
      for (std::size_t s = 0; s < p.size(); ++s) {
        if (q[s] <= 0.0) throw std::invalid_argument("zero reference probability");
        total += p[s] * std::log(p[s] / q[s]);
      }
      break;
    case FDivergence::kReverseKl:
      for (std::size_t s = 0; s < p.size(); ++s) {
        if (q[s] <= 0.0) throw std::invalid_argument("zero reference probability");
        total += q[s] * std::log(q[s] / p[s]);
      }
      break;
    case FDivergence::kJsSquared:
      for (std::size_t s = 0; s < p.size(); ++s) {
        double m = 0.5 * (p[s] + q[s]);
        total += 0.5 * p[s] * std::log(p[s] / m) + 0.5 * q[s] * std::log(q[s] / m);
      }
      break;
    case FDivergence::kHellingerSquared:
      for (std::size_t s = 0; s < p.size(); ++s) {
        double diff = std::sqrt(p[s]) - std::sqrt(q[s]);
        total += diff * diff;
      }
      break;
  }
  return std::max(total, 0.0);
}

double extrinsic_distance(const Wald& w1, const Wald& w2, ProbMetric metric, int cap) {
  if (w1.n_leaves() != w2.n_leaves()) {
    throw std::invalid_argument("walds must share the leaf set");
  }
  CharacterDistribution p = full_distribution(w1, cap);
  CharacterDistribution q = full_distribution(w2, cap);
  double sq = metric == ProbMetric::kJs ? f_divergence(p, q, FDivergence::kJsSquared)
                                        : f_divergence(p, q, FDivergence::kHellingerSquared);
  return std::sqrt(sq);
}

}  // namespace waldgeo
