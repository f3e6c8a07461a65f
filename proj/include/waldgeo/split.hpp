#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

#include "waldgeo/common.hpp"

namespace waldgeo {

// A split is a bipartition of a leaf set ("universe") induced by cutting one
// edge.  The universe is the leaf set of the connected component the edge
// belongs to; for a single tree it is all of 1..N.  The stored side never
// contains the lowest-numbered leaf of the universe, so each bipartition has
// exactly one encoding.
class Split {
 public:
  Split(LeafSet side, LeafSet universe);

  LeafSet side() const { return side_; }
  LeafSet universe() const { return universe_; }
  LeafSet other_side() const { return universe_ & ~side_; }

  // True iff cutting this edge separates leaves u and v (1-based).
  bool separates(int u, int v) const {
    LeafSet bu = leaf_bit(u), bv = leaf_bit(v);
    if (!(universe_ & bu) || !(universe_ & bv)) return false;
    return ((side_ & bu) != 0) != ((side_ & bv) != 0);
  }

  // A split is pendant when one part is a single leaf.
  bool is_pendant() const {
    return popcount(side_) == 1 || popcount(other_side()) == 1;
  }

  // The leaf cut off by a pendant split.  When both parts are singletons
  // (a two-leaf component) the lower leaf is reported.
  int pendant_leaf() const;

  // Two splits of the same universe are compatible when at least one of the
  // four pairwise side intersections is empty.  Splits of different
  // universes belong to different components and never conflict.
  bool compatible_with(const Split& other) const;

  std::string to_string() const;

  friend bool operator==(const Split&, const Split&) = default;
  friend std::strong_ordering operator<=>(const Split& a, const Split& b) {
    if (auto c = a.universe_ <=> b.universe_; c != 0) return c;
    return a.side_ <=> b.side_;
  }

 private:
  LeafSet side_;
  LeafSet universe_;
};

// Sort key placing pendant splits first (by their leaf) and internal splits
// after, ordered by side bit pattern.
bool topology_split_order(const Split& a, const Split& b);

}  // namespace waldgeo

template <>
struct std::hash<waldgeo::Split> {
  std::size_t operator()(const waldgeo::Split& s) const noexcept {
    std::size_t h = std::hash<std::uint64_t>{}(s.side());
    return h ^ (std::hash<std::uint64_t>{}(s.universe()) + 0x9e3779b97f4a7c15ULL + (h << 6));
  }
};
