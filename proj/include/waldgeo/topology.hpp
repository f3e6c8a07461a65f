#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "waldgeo/split.hpp"

namespace waldgeo {

// The split set of a forest on leaves 1..N.  Splits are kept in a fixed
// canonical order (pendant splits by leaf number, then internal splits by
// bit pattern) so topologies compare and hash deterministically.  Leaves
// that appear in no split universe form isolated single-leaf components.
class Topology {
 public:
  Topology(int n_leaves, std::vector<Split> splits);
  Topology() : Topology(1, {}) {}  // the single-leaf forest

  int n_leaves() const { return n_leaves_; }
  const std::vector<Split>& splits() const { return splits_; }
  std::size_t size() const { return splits_.size(); }
  const Split& split(std::size_t i) const { return splits_[i]; }

  // Connected components as leaf masks, ordered by lowest leaf.
  const std::vector<LeafSet>& components() const { return components_; }

  // Index of a split within splits(), or -1.
  int index_of(const Split& s) const;

  // Single tree over all leaves with the full 2N-3 splits.
  bool fully_resolved() const;

  // Positions of pendant/internal splits within splits().
  std::vector<int> pendant_indices() const;
  std::vector<int> internal_indices() const;

  bool operator==(const Topology& other) const {
    return n_leaves_ == other.n_leaves_ && splits_ == other.splits_;
  }

  std::string to_string() const;

 private:
  int n_leaves_;
  std::vector<Split> splits_;
  std::vector<LeafSet> components_;
};

// sigma^e for each split: sigma_uv = 1 iff edge e lies on the path between
// leaves u and v.  Matrices are N x N, symmetric, zero diagonal.
std::vector<Eigen::MatrixXd> split_matrices(const Topology& t);

// The two alternative resolutions of the degree-4 vertex obtained by
// contracting the given internal split of a fully resolved tree.
std::pair<Topology, Topology> nni_neighbors(const Topology& t, const Split& internal_split);

// Explicit tree shape of one component, rebuilt from its splits.  Vertex 0
// is the component's lowest leaf and serves as the recursion root; every
// edge knows which split (by index into the owning Topology) it realizes.
struct ComponentTree {
  LeafSet leaf_mask = 0;
  std::vector<int> leaf_of;                            // vertex -> leaf or 0
  std::vector<std::vector<std::pair<int, int>>> adj;   // vertex -> (neighbor, split index)
  int n_vertices() const { return static_cast<int>(leaf_of.size()); }
};

std::vector<ComponentTree> component_trees(const Topology& t);

}  // namespace waldgeo
