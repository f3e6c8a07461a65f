#include "waldgeo/random_wald.hpp"

#include <stdexcept>

#include "waldgeo/forest_graph.hpp"

namespace waldgeo {

Topology random_topology(int n_leaves, std::mt19937_64& rng) {
  if (n_leaves < 2) throw std::invalid_argument("need at least two leaves");
  // Start from the two-leaf tree and attach each next leaf to a uniformly
  // chosen edge; every fully resolved shape arises with equal probability.
  ForestGraph g(n_leaves);
  g.add_edge(g.leaf_vertex(1), g.leaf_vertex(2), 0.5);
  for (int u = 3; u <= n_leaves; ++u) {
    std::uniform_int_distribution<std::size_t> pick(0, g.edges().size() - 1);
    auto edge = g.edges()[pick(rng)];
    ForestGraph next(n_leaves);
    for (int v = g.n_leaves(); v < g.n_vertices(); ++v) next.add_internal_vertex();
    int mid = next.add_internal_vertex();
    for (const auto& e : g.edges()) {
      if (e.a == edge.a && e.b == edge.b) {
        next.add_edge(e.a, mid, 0.5);
        next.add_edge(mid, e.b, 0.5);
      } else {
        next.add_edge(e.a, e.b, e.lambda);
      }
    }
    next.add_edge(next.leaf_vertex(u), mid, 0.5);
    g = next;
  }
  return canonicalize(g).topology();
}

Wald random_wald(int n_leaves, std::mt19937_64& rng, const RandomWaldOptions& opts) {
  Topology topology = random_topology(n_leaves, rng);
  std::uniform_real_distribution<double> weight(opts.lambda_min, opts.lambda_max);
  std::vector<double> lambda(topology.size());
  for (auto& w : lambda) w = weight(rng);
  return Wald(std::move(topology), std::move(lambda));
}

}  // namespace waldgeo
