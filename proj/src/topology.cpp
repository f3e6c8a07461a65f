#include "waldgeo/topology.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace waldgeo {

Topology::Topology(int n_leaves, std::vector<Split> splits)
    : n_leaves_(n_leaves), splits_(std::move(splits)) {
  if (n_leaves_ < 1 || n_leaves_ > kMaxLeaves) {
    throw std::invalid_argument("leaf count must be in 1.." + std::to_string(kMaxLeaves));
  }
  const LeafSet all = all_leaves(n_leaves_);
  std::sort(splits_.begin(), splits_.end(), topology_split_order);
  for (std::size_t i = 0; i < splits_.size(); ++i) {
    if (splits_[i].universe() & ~all) {
      throw std::invalid_argument("split universe mentions a leaf above N");
    }
    if (i > 0 && splits_[i] == splits_[i - 1]) {
      throw std::invalid_argument("duplicate split " + splits_[i].to_string());
    }
  }
  for (std::size_t i = 0; i < splits_.size(); ++i) {
    for (std::size_t j = i + 1; j < splits_.size(); ++j) {
      const auto& a = splits_[i];
      const auto& b = splits_[j];
      if (a.universe() == b.universe()) {
        if (!a.compatible_with(b)) {
          throw std::invalid_argument("incompatible splits " + a.to_string() + " and " + b.to_string());
        }
      } else if (a.universe() & b.universe()) {
        throw std::invalid_argument("split universes must be equal or disjoint");
      }
    }
  }
  // Components: distinct universes plus isolated leaves.
  LeafSet covered = 0;
  for (const auto& s : splits_) {
    if (!(covered & s.universe())) components_.push_back(s.universe());
    covered |= s.universe();
  }
  for (int u = 1; u <= n_leaves_; ++u) {
    if (!(covered & leaf_bit(u))) components_.push_back(leaf_bit(u));
  }
  std::sort(components_.begin(), components_.end(),
            [](LeafSet a, LeafSet b) { return lowest_leaf(a) < lowest_leaf(b); });
  // Every leaf of a multi-leaf component must carry its pendant split.
  for (LeafSet comp : components_) {
    if (popcount(comp) < 2) continue;
    for (int u = 1; u <= n_leaves_; ++u) {
      if (!(comp & leaf_bit(u))) continue;
      Split pendant(comp & ~leaf_bit(u), comp);
      if (index_of(pendant) < 0) {
        throw std::invalid_argument("missing pendant split for leaf " + std::to_string(u));
      }
    }
  }
}

int Topology::index_of(const Split& s) const {
  for (std::size_t i = 0; i < splits_.size(); ++i) {
    if (splits_[i] == s) return static_cast<int>(i);
  }
  return -1;
}

bool Topology::fully_resolved() const {
  return components_.size() == 1 && n_leaves_ >= 2 &&
         static_cast<int>(splits_.size()) == 2 * n_leaves_ - 3;
}

std::vector<int> Topology::pendant_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < splits_.size(); ++i) {
    if (splits_[i].is_pendant()) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> Topology::internal_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < splits_.size(); ++i) {
    if (!splits_[i].is_pendant()) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::string Topology::to_string() const {
  std::string out;
  for (const auto& s : splits_) {
    if (!out.empty()) out += " ";
    out += s.to_string();
  }
  return out.empty() ? "{}" : out;
}

std::vector<Eigen::MatrixXd> split_matrices(const Topology& t) {
  const int n = t.n_leaves();
  std::vector<Eigen::MatrixXd> sigmas;
  sigmas.reserve(t.size());
  for (const auto& s : t.splits()) {
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(n, n);
    for (int u = 1; u <= n; ++u) {
      for (int v = u + 1; v <= n; ++v) {
        if (s.separates(u, v)) sigma(u - 1, v - 1) = sigma(v - 1, u - 1) = 1.0;
      }
    }
    sigmas.push_back(std::move(sigma));
  }
  return sigmas;
}

namespace {

// The two maximal blocks a part decomposes into around a degree-3 vertex.
std::pair<LeafSet, LeafSet> decompose_part(const Topology& t, const Split& e, LeafSet part) {
  std::vector<LeafSet> candidates;
  for (const auto& f : t.splits()) {
    if (f == e) continue;
    for (LeafSet p : {f.side(), f.other_side()}) {
      if (p != part && (p & ~part) == 0) candidates.push_back(p);
    }
  }
  std::vector<LeafSet> maximal;
  for (LeafSet p : candidates) {
    bool dominated = false;
    for (LeafSet q : candidates) {
      if (q != p && (p & ~q) == 0) dominated = true;
    }
    if (!dominated && std::find(maximal.begin(), maximal.end(), p) == maximal.end()) {
      maximal.push_back(p);
    }
  }
  if (maximal.size() != 2 || (maximal[0] | maximal[1]) != part || (maximal[0] & maximal[1])) {
    throw std::logic_error("split neighbourhood does not decompose into two blocks");
  }
  return {maximal[0], maximal[1]};
}

}  // namespace

std::pair<Topology, Topology> nni_neighbors(const Topology& t, const Split& internal_split) {
  if (!t.fully_resolved()) {
    throw std::invalid_argument("nni requires a fully resolved topology");
  }
  if (internal_split.is_pendant()) {
    throw std::invalid_argument("nni requires an internal split");
  }
  if (t.index_of(internal_split) < 0) {
    throw std::invalid_argument("split does not belong to the topology");
  }
  auto [a1, a2] = decompose_part(t, internal_split, internal_split.side());
  auto [b1, b2] = decompose_part(t, internal_split, internal_split.other_side());
  const LeafSet universe = internal_split.universe();

  auto rebuilt = [&](LeafSet new_side) {
    std::vector<Split> splits;
    for (const auto& s : t.splits()) {
      if (!(s == internal_split)) splits.push_back(s);
    }
    splits.emplace_back(new_side, universe);
    return Topology(t.n_leaves(), std::move(splits));
  };
  Topology first = rebuilt(a1 | b1);
  Topology second = rebuilt(a1 | b2);
  return {std::move(first), std::move(second)};
}

std::vector<ComponentTree> component_trees(const Topology& t) {
  std::vector<ComponentTree> trees;
  for (LeafSet comp : t.components()) {
    ComponentTree tree;
    tree.leaf_mask = comp;
    const int low = lowest_leaf(comp);
    tree.leaf_of.push_back(low);
    tree.adj.emplace_back();
    if (popcount(comp) == 1) {
      trees.push_back(std::move(tree));
      continue;
    }
    // Sides (never containing the lowest leaf) form a laminar family whose
    // Hasse diagram is the tree: each side's edge joins its vertex to the
    // vertex of the smallest side strictly containing it, or to the root.
    struct Entry {
      LeafSet side;
      int split_index;
      int vertex = -1;
    };
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t.split(i).universe() == comp) {
        entries.push_back({t.split(i).side(), static_cast<int>(i)});
      }
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return popcount(a.side) < popcount(b.side); });
    for (auto& e : entries) {
      if (popcount(e.side) == 1) {
        e.vertex = tree.n_vertices();
        tree.leaf_of.push_back(lowest_leaf(e.side));
      } else {
        e.vertex = tree.n_vertices();
        tree.leaf_of.push_back(0);
      }
      tree.adj.emplace_back();
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
      int parent_vertex = 0;
      for (std::size_t j = i + 1; j < entries.size(); ++j) {
        if ((entries[i].side & ~entries[j].side) == 0 && entries[i].side != entries[j].side) {
          parent_vertex = entries[j].vertex;
          break;
        }
      }
      tree.adj[entries[i].vertex].emplace_back(parent_vertex, entries[i].split_index);
      tree.adj[parent_vertex].emplace_back(entries[i].vertex, entries[i].split_index);
    }
    trees.push_back(std::move(tree));
  }
  return trees;
}

}  // namespace waldgeo
