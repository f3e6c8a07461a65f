#include "waldgeo/forest_graph.hpp"

#include <numeric>
#include <stdexcept>

namespace waldgeo {

ForestGraph::ForestGraph(int n_leaves) : n_leaves_(n_leaves) {
  if (n_leaves < 1 || n_leaves > kMaxLeaves) {
    throw std::invalid_argument("leaf count must be in 1.." + std::to_string(kMaxLeaves));
  }
  label_.resize(n_leaves);
  std::iota(label_.begin(), label_.end(), 1);
}

int ForestGraph::add_internal_vertex() {
  label_.push_back(0);
  return n_vertices() - 1;
}

void ForestGraph::add_edge(int a, int b, double lambda) {
  if (a < 0 || b < 0 || a >= n_vertices() || b >= n_vertices() || a == b) {
    throw std::invalid_argument("bad edge endpoints");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("edge weight out of [0,1]");
  }
  edges_.push_back({a, b, lambda});
}

int ForestGraph::degree(int v) const {
  int d = 0;
  for (const auto& e : edges_) d += (e.a == v) + (e.b == v);
  return d;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

struct Work {
  std::vector<int> label;
  std::vector<bool> vertex_alive;
  struct Edge {
    int a, b;
    double lambda;
    bool alive;
  };
  std::vector<Edge> edges;

  int degree(int v) const {
    int d = 0;
    for (const auto& e : edges) {
      if (e.alive) d += (e.a == v) + (e.b == v);
    }
    return d;
  }
};

}  // namespace

Wald canonicalize(const ForestGraph& f) {
  Work w;
  w.label.assign(f.n_vertices(), 0);
  for (int v = 0; v < f.n_vertices(); ++v) w.label[v] = f.label(v);
  w.vertex_alive.assign(f.n_vertices(), true);
  {
    UnionFind uf(f.n_vertices());
    for (const auto& e : f.edges()) {
      if (!uf.unite(e.a, e.b)) {
        throw std::invalid_argument("input graph contains a cycle");
      }
      w.edges.push_back({e.a, e.b, e.lambda, true});
    }
  }

  bool changed = true;
  while (changed) {
    changed = false;
    // Boundary at infinity: weight-1 edges are deleted.
    for (auto& e : w.edges) {
      if (e.alive && e.lambda == 1.0) {
        e.alive = false;
        changed = true;
      }
    }
    // BHV boundary: internal weight-0 edges are contracted.
    for (auto& e : w.edges) {
      if (!e.alive || e.lambda != 0.0) continue;
      if (w.label[e.a] != 0 || w.label[e.b] != 0) continue;
      int keep = e.a, drop = e.b;
      e.alive = false;
      w.vertex_alive[drop] = false;
      for (auto& other : w.edges) {
        if (!other.alive) continue;
        if (other.a == drop) other.a = keep;
        if (other.b == drop) other.b = keep;
      }
      changed = true;
    }
    // Unlabelled vertices of degree 0, 1, 2 are removed.
    for (int v = 0; v < static_cast<int>(w.vertex_alive.size()); ++v) {
      if (!w.vertex_alive[v] || w.label[v] != 0) continue;
      std::vector<int> incident;
      for (int i = 0; i < static_cast<int>(w.edges.size()); ++i) {
        if (w.edges[i].alive && (w.edges[i].a == v || w.edges[i].b == v)) incident.push_back(i);
      }
      if (incident.size() == 0) {
        w.vertex_alive[v] = false;
        changed = true;
      } else if (incident.size() == 1) {
        w.edges[incident[0]].alive = false;
        w.vertex_alive[v] = false;
        changed = true;
      } else if (incident.size() == 2) {
        auto& e1 = w.edges[incident[0]];
        auto& e2 = w.edges[incident[1]];
        int x = e1.a == v ? e1.b : e1.a;
        int y = e2.a == v ? e2.b : e2.a;
        double merged = e1.lambda + e2.lambda - e1.lambda * e2.lambda;
        e1.alive = false;
        e2 = {x, y, merged, true};
        w.vertex_alive[v] = false;
        changed = true;
      }
    }
  }

  for (int v = 0; v < static_cast<int>(w.vertex_alive.size()); ++v) {
    if (w.vertex_alive[v] && w.label[v] != 0 && w.degree(v) > 1) {
      throw InvalidWaldError("leaf " + std::to_string(w.label[v]) + " has degree > 1");
    }
  }

  // Coincident leaves: two leaves joined by a path of weight-0 edges.
  {
    UnionFind zero(static_cast<int>(w.vertex_alive.size()));
    for (const auto& e : w.edges) {
      if (e.alive && e.lambda == 0.0) zero.unite(e.a, e.b);
    }
    std::vector<int> leaf_at(static_cast<int>(w.vertex_alive.size()), 0);
    for (int v = 0; v < static_cast<int>(w.vertex_alive.size()); ++v) {
      if (!w.vertex_alive[v] || w.label[v] == 0) continue;
      int root = zero.find(v);
      if (leaf_at[root] != 0) {
        throw InvalidWaldError("leaves " + std::to_string(leaf_at[root]) + " and " +
                               std::to_string(w.label[v]) + " are coincident");
      }
      leaf_at[root] = w.label[v];
    }
  }

  // Components and the split each surviving edge induces.
  const int nv = static_cast<int>(w.vertex_alive.size());
  UnionFind comp(nv);
  for (const auto& e : w.edges) {
    if (e.alive) comp.unite(e.a, e.b);
  }
  std::vector<LeafSet> comp_leaves(nv, 0);
  for (int v = 0; v < nv; ++v) {
    if (w.vertex_alive[v] && w.label[v] != 0) comp_leaves[comp.find(v)] |= leaf_bit(w.label[v]);
  }

  std::vector<Split> splits;
  std::vector<double> lambdas_by_split;
  for (int i = 0; i < static_cast<int>(w.edges.size()); ++i) {
    const auto& e = w.edges[i];
    if (!e.alive) continue;
    LeafSet universe = comp_leaves[comp.find(e.a)];
    // Leaves reachable from endpoint a without crossing this edge.
    LeafSet side = 0;
    std::vector<int> stack = {e.a};
    std::vector<bool> seen(nv, false);
    seen[e.a] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (w.label[v] != 0) side |= leaf_bit(w.label[v]);
      for (int j = 0; j < static_cast<int>(w.edges.size()); ++j) {
        if (j == i || !w.edges[j].alive) continue;
        const auto& o = w.edges[j];
        if (o.a == v && !seen[o.b]) {
          seen[o.b] = true;
          stack.push_back(o.b);
        } else if (o.b == v && !seen[o.a]) {
          seen[o.a] = true;
          stack.push_back(o.a);
        }
      }
    }
    splits.emplace_back(side, universe);
    lambdas_by_split.push_back(e.lambda);
  }

  // Reorder weights to the canonical split order.
  Topology topology(f.n_leaves(), splits);
  std::vector<double> lambda(topology.size());
  for (std::size_t i = 0; i < splits.size(); ++i) {
    lambda[topology.index_of(splits[i])] = lambdas_by_split[i];
  }
  return Wald(std::move(topology), std::move(lambda));
}

std::pair<Topology, std::vector<double>> split_decomposition(const ForestGraph& g) {
  const int nv = g.n_vertices();
  UnionFind comp(nv);
  for (const auto& e : g.edges()) comp.unite(e.a, e.b);
  std::vector<LeafSet> comp_leaves(nv, 0);
  for (int v = 0; v < nv; ++v) {
    if (g.label(v) != 0) comp_leaves[comp.find(v)] |= leaf_bit(g.label(v));
  }

  std::vector<Split> splits;
  std::vector<double> weights;
  for (int i = 0; i < static_cast<int>(g.edges().size()); ++i) {
    const auto& e = g.edges()[i];
    LeafSet universe = comp_leaves[comp.find(e.a)];
    if (popcount(universe) < 2) {
      throw std::invalid_argument("edge in a component with fewer than two leaves");
    }
    LeafSet side = 0;
    std::vector<int> stack = {e.a};
    std::vector<bool> seen(nv, false);
    seen[e.a] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (g.label(v) != 0) side |= leaf_bit(g.label(v));
      for (int j = 0; j < static_cast<int>(g.edges().size()); ++j) {
        if (j == i) continue;
        const auto& o = g.edges()[j];
        int next = o.a == v ? o.b : (o.b == v ? o.a : -1);
        if (next >= 0 && !seen[next]) {
          seen[next] = true;
          stack.push_back(next);
        }
      }
    }
    splits.emplace_back(side, universe);
    weights.push_back(e.lambda);
  }

  Topology topology(g.n_leaves(), splits);
  std::vector<double> aligned(topology.size());
  for (std::size_t i = 0; i < splits.size(); ++i) {
    aligned[topology.index_of(splits[i])] = weights[i];
  }
  return {std::move(topology), std::move(aligned)};
}

ForestGraph to_forest_graph(const Wald& w) {
  ForestGraph g(w.n_leaves());
  for (const auto& tree : component_trees(w.topology())) {
    std::vector<int> vertex_map(tree.n_vertices(), -1);
    for (int v = 0; v < tree.n_vertices(); ++v) {
      vertex_map[v] = tree.leaf_of[v] != 0 ? g.leaf_vertex(tree.leaf_of[v])
                                           : g.add_internal_vertex();
    }
    for (int v = 0; v < tree.n_vertices(); ++v) {
      for (auto [nbr, split_index] : tree.adj[v]) {
        if (nbr > v) g.add_edge(vertex_map[v], vertex_map[nbr], w.lambda_of(split_index));
      }
    }
  }
  return g;
}

}  // namespace waldgeo
