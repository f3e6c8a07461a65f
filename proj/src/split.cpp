#include "waldgeo/split.hpp"

#include <stdexcept>

namespace waldgeo {

Split::Split(LeafSet side, LeafSet universe) : side_(side), universe_(universe) {
  if (universe == 0 || popcount(universe) < 2) {
    throw std::invalid_argument("split universe needs at least two leaves");
  }
  if ((side & ~universe) != 0) {
    throw std::invalid_argument("split side is not contained in its universe");
  }
  LeafSet low = leaf_bit(lowest_leaf(universe));
  if (side_ & low) side_ = universe & ~side_;
  if (side_ == 0) {
    throw std::invalid_argument("split must have two nonempty sides");
  }
}

int Split::pendant_leaf() const {
  LeafSet other = other_side();
  if (popcount(other) == 1) return lowest_leaf(other);
  if (popcount(side_) == 1) return lowest_leaf(side_);
  throw std::logic_error("pendant_leaf called on an internal split");
}

bool Split::compatible_with(const Split& other) const {
  if (universe_ != other.universe_) return true;
  LeafSet a = side_, ac = other_side();
  LeafSet b = other.side_, bc = other.other_side();
  return (a & b) == 0 || (a & bc) == 0 || (ac & b) == 0 || (ac & bc) == 0;
}

std::string Split::to_string() const {
  std::string out = "{";
  bool first = true;
  for (int u = 1; u <= kMaxLeaves; ++u) {
    if (side_ & leaf_bit(u)) {
      if (!first) out += ",";
      out += std::to_string(u);
      first = false;
    }
  }
  out += "|";
  first = true;
  for (int u = 1; u <= kMaxLeaves; ++u) {
    if (other_side() & leaf_bit(u)) {
      if (!first) out += ",";
      out += std::to_string(u);
      first = false;
    }
  }
  out += "}";
  return out;
}

bool topology_split_order(const Split& a, const Split& b) {
  bool ap = a.is_pendant(), bp = b.is_pendant();
  if (ap != bp) return ap;
  if (ap && bp) {
    if (a.pendant_leaf() != b.pendant_leaf()) return a.pendant_leaf() < b.pendant_leaf();
  }
  if (a.universe() != b.universe()) return a.universe() < b.universe();
  return a.side() < b.side();
}

}  // namespace waldgeo
