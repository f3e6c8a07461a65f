#include "waldgeo/bhv.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace waldgeo {

namespace {

struct WeightedSplit {
  Split split;
  double length;
};

// Max-flow on the bipartite incompatibility graph: source -> a (capacity
// w_a), a -> b (infinite) for incompatible pairs, b -> sink (capacity w_b).
// The min cut yields the min-weight vertex cover.
class BipartiteFlow {
 public:
  BipartiteFlow(const std::vector<double>& a_weights, const std::vector<double>& b_weights,
                const std::vector<std::pair<int, int>>& incompatible) {
    na_ = static_cast<int>(a_weights.size());
    nb_ = static_cast<int>(b_weights.size());
    const int nodes = na_ + nb_ + 2;
    head_.assign(nodes, -1);
    for (int i = 0; i < na_; ++i) add_pair(source(), 2 + i, a_weights[i]);
    for (int j = 0; j < nb_; ++j) add_pair(2 + na_ + j, sink(), b_weights[j]);
    for (auto [i, j] : incompatible) add_pair(2 + i, 2 + na_ + j, kInfinity);
  }

  double max_flow() {
    double total = 0.0;
    for (;;) {
      auto parent_edge = bfs();
      if (parent_edge.empty()) return total;
      double push = kInfinity;
      for (int v = sink(); v != source();) {
        int e = parent_edge[v];
        push = std::min(push, cap_[e]);
        v = from_[e];
      }
      for (int v = sink(); v != source();) {
        int e = parent_edge[v];
        cap_[e] -= push;
        cap_[e ^ 1] += push;
        v = from_[e];
      }
      total += push;
    }
  }

  // After max_flow: vertices of the min cover are A-nodes unreachable from
  // the source in the residual graph and B-nodes reachable.
  std::pair<std::vector<bool>, std::vector<bool>> min_cover() {
    std::vector<bool> reachable(head_.size(), false);
    std::deque<int> queue = {source()};
    reachable[source()] = true;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int e = head_[v]; e >= 0; e = next_[e]) {
        if (cap_[e] > kResidualTol && !reachable[to_[e]]) {
          reachable[to_[e]] = true;
          queue.push_back(to_[e]);
        }
      }
    }
    std::vector<bool> cover_a(na_, false), cover_b(nb_, false);
    for (int i = 0; i < na_; ++i) cover_a[i] = !reachable[2 + i];
    for (int j = 0; j < nb_; ++j) cover_b[j] = reachable[2 + na_ + j];
    return {cover_a, cover_b};
  }

 private:
  static constexpr double kResidualTol = 1e-14;
  int source() const { return 0; }
  int sink() const { return 1; }

  void add_pair(int from, int to, double cap) {
    add_edge(from, to, cap);
    add_edge(to, from, 0.0);
  }
  void add_edge(int from, int to, double cap) {
    from_.push_back(from);
    to_.push_back(to);
    cap_.push_back(cap);
    next_.push_back(head_[from]);
    head_[from] = static_cast<int>(from_.size()) - 1;
  }

  std::vector<int> bfs() {
    std::vector<int> parent_edge(head_.size(), -1);
    std::vector<bool> seen(head_.size(), false);
    std::deque<int> queue = {source()};
    seen[source()] = true;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int e = head_[v]; e >= 0; e = next_[e]) {
        if (cap_[e] > kResidualTol && !seen[to_[e]]) {
          seen[to_[e]] = true;
          parent_edge[to_[e]] = e;
          if (to_[e] == sink()) return parent_edge;
          queue.push_back(to_[e]);
        }
      }
    }
    return {};
  }

  int na_ = 0, nb_ = 0;
  std::vector<int> head_, next_, from_, to_;
  std::vector<double> cap_;
};

double norm_of(const std::vector<WeightedSplit>& part) {
  double sq = 0.0;
  for (const auto& ws : part) sq += ws.length * ws.length;
  return std::sqrt(sq);
}

// Squared length of the crossing part: successive refinement of support
// pairs until no vertex cover of weight < 1 exists.
double crossing_part_squared(std::vector<WeightedSplit> a, std::vector<WeightedSplit> b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty()) return norm_of(b) * norm_of(b);
  if (b.empty()) return norm_of(a) * norm_of(a);

  std::deque<std::pair<std::vector<WeightedSplit>, std::vector<WeightedSplit>>> open;
  open.emplace_back(std::move(a), std::move(b));
  double total = 0.0;
  while (!open.empty()) {
    auto [part_a, part_b] = std::move(open.front());
    open.pop_front();
    double norm_a = norm_of(part_a), norm_b = norm_of(part_b);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < static_cast<int>(part_a.size()); ++i) {
      for (int j = 0; j < static_cast<int>(part_b.size()); ++j) {
        if (!part_a[i].split.compatible_with(part_b[j].split)) edges.emplace_back(i, j);
      }
    }
    if (edges.empty()) {
      // Fully compatible pair: each side moves on its own coordinates.
      total += norm_a * norm_a + norm_b * norm_b;
      continue;
    }
    bool refined = false;
    if (part_a.size() + part_b.size() > 2) {
      std::vector<double> wa(part_a.size()), wb(part_b.size());
      for (std::size_t i = 0; i < part_a.size(); ++i) {
        wa[i] = part_a[i].length * part_a[i].length / (norm_a * norm_a);
      }
      for (std::size_t j = 0; j < part_b.size(); ++j) {
        wb[j] = part_b[j].length * part_b[j].length / (norm_b * norm_b);
      }
      BipartiteFlow flow(wa, wb, edges);
      double cover_weight = flow.max_flow();
      if (cover_weight < 1.0 - 1e-12) {
        auto [cover_a, cover_b] = flow.min_cover();
        std::vector<WeightedSplit> c1, c2, d1, d2;
        for (std::size_t i = 0; i < part_a.size(); ++i) {
          (cover_a[i] ? c1 : c2).push_back(part_a[i]);
        }
        for (std::size_t j = 0; j < part_b.size(); ++j) {
          (cover_b[j] ? d2 : d1).push_back(part_b[j]);
        }
        if (!c1.empty() && !c2.empty() && !d1.empty() && !d2.empty()) {
          open.emplace_back(std::move(c1), std::move(d1));
          open.emplace_back(std::move(c2), std::move(d2));
          refined = true;
        }
      }
    }
    if (!refined) {
      total += (norm_a + norm_b) * (norm_a + norm_b);
    }
  }
  return total;
}

void check_inputs(const Wald& w1, const Wald& w2) {
  if (w1.n_leaves() != w2.n_leaves()) {
    throw std::invalid_argument("walds must share the leaf set");
  }
  if (w1.topology().components().size() != 1 || w2.topology().components().size() != 1) {
    throw std::invalid_argument("BHV distance needs single-component trees of finite length");
  }
}

double pendant_part_squared(const Wald& w1, const Wald& w2) {
  // distinct pendant splits (for N=2 one edge serves both leaves)
  double sq = 0.0;
  for (int i : w1.topology().pendant_indices()) {
    const Split& pendant = w1.topology().split(i);
    double l1 = length_from_lambda(w1.lambda_of(i));
    double l2 = length_from_lambda(w2.lambda_of(w2.topology().index_of(pendant)));
    sq += (l1 - l2) * (l1 - l2);
  }
  return sq;
}

std::map<Split, double const*> internal_lengths(const Wald& w, std::vector<double>& storage) {
  storage = w.lengths();
  std::map<Split, double const*> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!w.topology().split(i).is_pendant()) out.emplace(w.topology().split(i), &storage[i]);
  }
  return out;
}

}  // namespace

double bhv_distance(const Wald& w1, const Wald& w2) {
  check_inputs(w1, w2);
  double squared = pendant_part_squared(w1, w2);

  std::vector<double> store1, store2;
  auto internal1 = internal_lengths(w1, store1);
  auto internal2 = internal_lengths(w2, store2);

  // Common internal splits stay positive along the whole geodesic and
  // contribute coordinate-wise.
  std::vector<WeightedSplit> only1, only2;
  for (const auto& [split, len] : internal1) {
    auto it = internal2.find(split);
    if (it != internal2.end()) {
      squared += (*len - *it->second) * (*len - *it->second);
    } else {
      only1.push_back({split, *len});
    }
  }
  for (const auto& [split, len] : internal2) {
    if (!internal1.count(split)) only2.push_back({split, *len});
  }

  // Splits compatible with the whole other tree shrink to zero on their
  // own Euclidean coordinate; extraction iterates to a fixed point.
  auto compatible_with_all = [](const Split& s, const std::vector<WeightedSplit>& other) {
    for (const auto& ws : other) {
      if (!s.compatible_with(ws.split)) return false;
    }
    return true;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = only1.begin(); it != only1.end(); ++it) {
      if (compatible_with_all(it->split, only2)) {
        squared += it->length * it->length;
        only1.erase(it);
        changed = true;
        break;
      }
    }
    for (auto it = only2.begin(); it != only2.end(); ++it) {
      if (compatible_with_all(it->split, only1)) {
        squared += it->length * it->length;
        only2.erase(it);
        changed = true;
        break;
      }
    }
  }

  squared += crossing_part_squared(std::move(only1), std::move(only2));
  return std::sqrt(squared);
}

double bhv_cone_bound(const Wald& w1, const Wald& w2) {
  check_inputs(w1, w2);
  double internal_norm1 = 0.0, internal_norm2 = 0.0;
  std::vector<double> store1 = w1.lengths(), store2 = w2.lengths();
  for (std::size_t i = 0; i < w1.size(); ++i) {
    if (!w1.topology().split(i).is_pendant()) internal_norm1 += store1[i] * store1[i];
  }
  for (std::size_t i = 0; i < w2.size(); ++i) {
    if (!w2.topology().split(i).is_pendant()) internal_norm2 += store2[i] * store2[i];
  }
  double cone = std::sqrt(internal_norm1) + std::sqrt(internal_norm2);
  return std::sqrt(cone * cone + pendant_part_squared(w1, w2));
}

}  // namespace waldgeo
