#pragma once

#include <vector>

#include "waldgeo/wald.hpp"

namespace waldgeo {

// Raw vertex/edge forest, the parser output before canonicalization.
// Vertices carry leaf labels (0 for unlabelled); edges carry weights
// lambda in [0,1].
class ForestGraph {
 public:
  struct Edge {
    int a = 0;
    int b = 0;
    double lambda = 0.0;
  };

  explicit ForestGraph(int n_leaves);

  int n_leaves() const { return n_leaves_; }
  int n_vertices() const { return static_cast<int>(label_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  int label(int v) const { return label_[v]; }

  // Vertex for leaf u (1-based); leaves occupy vertices 0..N-1.
  int leaf_vertex(int u) const { return u - 1; }
  int add_internal_vertex();
  void add_edge(int a, int b, double lambda);

  int degree(int v) const;

 private:
  int n_leaves_;
  std::vector<int> label_;  // vertex -> leaf label or 0
  std::vector<Edge> edges_;
};

// Applies both boundary rules until a fixed point:
//   - edges with weight 1 are deleted, disconnecting their tree,
//   - internal edges with weight 0 are contracted,
//   - unlabelled vertices of degree 0 and 1 are removed, and degree-2
//     vertices are smoothed with the merged weight l1 + l2 - l1*l2.
// Throws InvalidWaldError when the result violates the forest conditions
// (coincident leaves, a labelled vertex of degree > 1).
Wald canonicalize(const ForestGraph& f);

// Graph representative of a canonical wald (one tree per component).
ForestGraph to_forest_graph(const Wald& w);

// Splits induced by the edges of a forest graph with their weights, aligned
// to the canonical split order.  Purely combinatorial: weight-0/1 edges are
// kept as they are, so the result is not necessarily a canonical wald.
std::pair<Topology, std::vector<double>> split_decomposition(const ForestGraph& g);

}  // namespace waldgeo
