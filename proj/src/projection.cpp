#include "waldgeo/projection.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "waldgeo/forest_graph.hpp"
#include "waldgeo/spd.hpp"

namespace waldgeo {

namespace {

// Optimizer view of one maximal orthant.
struct Chart {
  Topology topology;
  std::vector<Eigen::MatrixXd> sigmas;
  std::vector<bool> internal;
  Eigen::VectorXd ell;        // +inf on frozen coordinates
  std::vector<char> frozen;
};

Chart make_chart(const Topology& t, const Eigen::VectorXd& ell, std::vector<char> frozen,
                 double pendant_floor) {
  if (!t.fully_resolved()) {
    throw std::invalid_argument("projection needs a fully resolved seed topology");
  }
  Chart c{t, split_matrices(t), {}, ell, std::move(frozen)};
  if (c.frozen.empty()) c.frozen.assign(t.size(), 0);
  c.internal.reserve(t.size());
  for (const auto& s : t.splits()) c.internal.push_back(!s.is_pendant());
  for (int i = 0; i < c.ell.size(); ++i) {
    if (c.frozen[i]) continue;
    if (!c.internal[i]) {
      c.ell[i] = std::max(c.ell[i], pendant_floor);
    } else if (!(c.ell[i] > 0.0)) {
      throw std::invalid_argument("seed has a nonpositive internal length");
    }
  }
  return c;
}

Eigen::MatrixXd chart_covariance(const Chart& c) {
  const int n = c.topology.n_leaves();
  Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t e = 0; e < c.sigmas.size(); ++e) {
    if (!c.frozen[e]) dist += c.ell[e] * c.sigmas[e];
  }
  Eigen::MatrixXd s = (-dist).array().exp().matrix();
  for (std::size_t e = 0; e < c.sigmas.size(); ++e) {
    if (c.frozen[e]) s = s.cwiseProduct(Eigen::MatrixXd::Ones(n, n) - c.sigmas[e]);
  }
  return s;
}

struct Target {
  Eigen::MatrixXd s0;
  Eigen::MatrixXd root;      // S0^{1/2}
  Eigen::MatrixXd root_inv;  // S0^{-1/2}
};

Eigen::VectorXd chart_gradient(const Chart& c, const Target& target, const Eigen::MatrixXd& s) {
  Eigen::MatrixXd l = spd::log(target.root_inv * s * target.root_inv);
  Eigen::MatrixXd q = target.root_inv * l * target.root * spd::inverse(s);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(c.ell.size());
  for (int i = 0; i < grad.size(); ++i) {
    if (!c.frozen[i]) grad[i] = -(q * s.cwiseProduct(c.sigmas[i])).trace();
  }
  return grad;
}

std::string stratum_key(const Topology& t, const Split& contracted) {
  std::string key;
  for (const auto& s : t.splits()) {
    if (!(s == contracted)) key += s.to_string();
  }
  return key;
}

Wald chart_wald(const Chart& c) {
  ForestGraph g(c.topology.n_leaves());
  for (const auto& tree : component_trees(c.topology)) {
    std::vector<int> vertex_map(tree.n_vertices(), -1);
    for (int v = 0; v < tree.n_vertices(); ++v) {
      vertex_map[v] = tree.leaf_of[v] != 0 ? g.leaf_vertex(tree.leaf_of[v])
                                           : g.add_internal_vertex();
    }
    for (int v = 0; v < tree.n_vertices(); ++v) {
      for (auto [nbr, split_index] : tree.adj[v]) {
        if (nbr > v) {
          g.add_edge(vertex_map[v], vertex_map[nbr], lambda_from_length(c.ell[split_index]));
        }
      }
    }
  }
  return canonicalize(g);
}

ProjectionResult run_descent(const Eigen::MatrixXd& s0, Chart chart, bool global,
                             const ProjectionOptions& opts) {
  spd::require_spd(s0, "projection target");
  Target target{s0, spd::sqrt(s0), spd::inverse_sqrt(s0)};

  ProjectionResult result;
  result.orthant_path.push_back(chart.topology);

  Chart best = chart;
  double best_distance = kInfinity;
  std::map<std::string, int> crossings;

  Eigen::VectorXd prev_ell, prev_grad;
  bool have_previous = false;
  bool guard_tripped = false;
  int iter = 0;

  for (; iter < opts.max_iter; ++iter) {
    Eigen::MatrixXd s = chart_covariance(chart);
    double distance = spd::distance(s0, s);
    if (distance < best_distance) {
      best_distance = distance;
      best = chart;
    }
    Eigen::VectorXd grad = chart_gradient(chart, target, s);
    if (grad.norm() < opts.tol) {
      result.converged = true;
      break;
    }

    double alpha = opts.alpha0;
    if (have_previous) {
      Eigen::VectorXd dl = chart.ell - prev_ell;
      Eigen::VectorXd dg = grad - prev_grad;
      for (int i = 0; i < dl.size(); ++i) {
        if (chart.frozen[i]) dl[i] = dg[i] = 0.0;
      }
      double num = dl.dot(dg), den = dg.dot(dg);
      alpha = (std::isfinite(num) && num > 0.0 && den > 0.0) ? num / den : opts.alpha0;
    }
    prev_ell = chart.ell;
    prev_grad = grad;
    have_previous = true;

    Eigen::VectorXd next = chart.ell;
    for (int i = 0; i < next.size(); ++i) {
      if (!chart.frozen[i]) next[i] -= alpha * grad[i];
    }
    for (int i = 0; i < next.size(); ++i) {
      if (!chart.frozen[i] && !chart.internal[i] && next[i] < opts.pendant_floor) {
        next[i] = opts.pendant_floor;
      }
    }

    int crossing = -1;
    for (int i = 0; i < next.size(); ++i) {
      if (chart.frozen[i] || !chart.internal[i] || next[i] > 0.0) continue;
      if (crossing < 0 || next[i] < next[crossing]) crossing = i;
    }
    if (crossing < 0) {
      chart.ell = next;
      continue;
    }
    if (!global) {
      // Constrained to the orthant: stop at the last interior iterate.
      ++iter;
      break;
    }
    // Cross the codimension-1 boundary: fold lengths to their absolute
    // values and continue in whichever NNI neighbour is closer to s0.
    Split contracted = chart.topology.split(crossing);
    if (++crossings[stratum_key(chart.topology, contracted)] > opts.boundary_guard) {
      chart = best;
      guard_tripped = true;
      break;
    }
    Eigen::VectorXd folded = next;
    for (int i = 0; i < folded.size(); ++i) {
      if (!chart.frozen[i]) folded[i] = std::abs(folded[i]);
    }
    auto [first, second] = nni_neighbors(chart.topology, contracted);
    Chart chosen = chart;
    double chosen_distance = kInfinity;
    for (const Topology& candidate : {first, second}) {
      Eigen::VectorXd ell(candidate.size());
      std::vector<char> frozen(candidate.size(), 0);
      for (std::size_t i = 0; i < candidate.size(); ++i) {
        int at = chart.topology.index_of(candidate.split(i));
        if (at >= 0) {
          ell[i] = folded[at];
          frozen[i] = chart.frozen[at];
        } else {
          ell[i] = folded[crossing];
        }
      }
      Chart trial = make_chart(candidate, ell, std::move(frozen), opts.pendant_floor);
      double trial_distance = spd::distance(s0, chart_covariance(trial));
      if (trial_distance < chosen_distance) {
        chosen_distance = trial_distance;
        chosen = std::move(trial);
      }
    }
    chart = std::move(chosen);
    result.orthant_path.push_back(chart.topology);
    have_previous = false;  // BB memory does not transfer across orthants
  }

  if (guard_tripped) result.converged = false;
  result.iterations = iter;
  result.wald = chart_wald(chart);
  result.distance = spd::distance(s0, covariance_of(result.wald));
  result.state = ResolvedSeed{chart.topology, chart.ell, chart.frozen};
  return result;
}

// Lexicographically smallest edge of the component containing any vertex in
// `mask`, for deterministic attachment.
int smallest_edge(const ForestGraph& g, const std::vector<int>& component, int comp_id) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(g.edges().size()); ++i) {
    const auto& e = g.edges()[i];
    if (component[e.a] != comp_id) continue;
    if (best < 0) {
      best = i;
      continue;
    }
    const auto& b = g.edges()[best];
    auto key = [](const ForestGraph::Edge& x) {
      return std::make_pair(std::min(x.a, x.b), std::max(x.a, x.b));
    };
    if (key(e) < key(b)) best = i;
  }
  return best;
}

}  // namespace

ResolvedSeed resolve_representative(const Wald& w, double eps_internal) {
  if (w.n_leaves() < 2) throw std::invalid_argument("need at least two leaves");
  ForestGraph g = to_forest_graph(w);
  const double eps_lambda = lambda_from_length(eps_internal);

  // Reconnect components through weight-1 edges attached at subdivision
  // points (or directly at isolated leaves).
  auto components_of = [](const ForestGraph& graph) {
    std::vector<int> comp(graph.n_vertices(), -1);
    int count = 0;
    for (int v = 0; v < graph.n_vertices(); ++v) {
      if (comp[v] >= 0) continue;
      std::vector<int> stack = {v};
      comp[v] = count;
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (const auto& e : graph.edges()) {
          int other = e.a == x ? e.b : (e.b == x ? e.a : -1);
          if (other >= 0 && comp[other] < 0) {
            comp[other] = count;
            stack.push_back(other);
          }
        }
      }
      ++count;
    }
    return std::make_pair(comp, count);
  };

  // Subdividing rebuilds the graph, so component labels are recomputed
  // before every attachment.
  auto attach_point = [&g](const std::vector<int>& comp, int comp_id) {
    int edge = smallest_edge(g, comp, comp_id);
    if (edge < 0) {
      for (int v = 0; v < g.n_vertices(); ++v) {
        if (comp[v] == comp_id) return v;
      }
      throw std::logic_error("empty component");
    }
    auto e = g.edges()[edge];
    double half = 1.0 - std::sqrt(1.0 - e.lambda);
    ForestGraph next(g.n_leaves());
    for (int v = g.n_leaves(); v < g.n_vertices(); ++v) next.add_internal_vertex();
    int mid = next.add_internal_vertex();
    for (int i = 0; i < static_cast<int>(g.edges().size()); ++i) {
      const auto& o = g.edges()[i];
      if (i == edge) {
        next.add_edge(o.a, mid, half);
        next.add_edge(mid, o.b, half);
      } else {
        next.add_edge(o.a, o.b, o.lambda);
      }
    }
    g = next;
    return mid;
  };
  for (;;) {
    auto [comp, count] = components_of(g);
    if (count <= 1) break;
    int a = attach_point(comp, 0);
    auto [comp2, count2] = components_of(g);
    int other = comp2[a] == 0 ? 1 : 0;
    int b = attach_point(comp2, other);
    g.add_edge(a, b, 1.0);
  }

  // Resolve multifurcations: peel off the two neighbours with the lowest
  // reachable leaves onto a fresh vertex joined by a short edge.
  for (;;) {
    int vertex = -1;
    for (int v = g.n_leaves(); v < g.n_vertices(); ++v) {
      if (g.degree(v) > 3) {
        vertex = v;
        break;
      }
    }
    if (vertex < 0) break;
    std::vector<std::pair<int, int>> incident;  // (min reachable leaf, edge index)
    for (int i = 0; i < static_cast<int>(g.edges().size()); ++i) {
      const auto& e = g.edges()[i];
      if (e.a != vertex && e.b != vertex) continue;
      int start = e.a == vertex ? e.b : e.a;
      int min_leaf = kMaxLeaves + 1;
      std::vector<int> stack = {start};
      std::vector<bool> seen(g.n_vertices(), false);
      seen[vertex] = seen[start] = true;
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        if (x < g.n_leaves()) min_leaf = std::min(min_leaf, x + 1);
        for (const auto& o : g.edges()) {
          int next_v = o.a == x ? o.b : (o.b == x ? o.a : -1);
          if (next_v >= 0 && !seen[next_v]) {
            seen[next_v] = true;
            stack.push_back(next_v);
          }
        }
      }
      incident.emplace_back(min_leaf, i);
    }
    std::sort(incident.begin(), incident.end());
    ForestGraph next(g.n_leaves());
    for (int v = g.n_leaves(); v < g.n_vertices(); ++v) next.add_internal_vertex();
    int fresh = next.add_internal_vertex();
    for (int i = 0; i < static_cast<int>(g.edges().size()); ++i) {
      const auto& e = g.edges()[i];
      int endpoint_a = e.a, endpoint_b = e.b;
      if (i == incident[0].second || i == incident[1].second) {
        if (endpoint_a == vertex) endpoint_a = fresh;
        if (endpoint_b == vertex) endpoint_b = fresh;
      }
      next.add_edge(endpoint_a, endpoint_b, e.lambda);
    }
    next.add_edge(vertex, fresh, eps_lambda);
    g = next;
  }

  auto [topology, lambda] = split_decomposition(g);
  ResolvedSeed seed{topology, Eigen::VectorXd(topology.size()),
                    std::vector<char>(topology.size(), 0)};
  for (std::size_t i = 0; i < topology.size(); ++i) {
    seed.frozen[i] = lambda[i] == 1.0;
    seed.ell[i] = length_from_lambda(lambda[i]);
    if (!seed.frozen[i] && !topology.split(i).is_pendant() && seed.ell[i] < eps_internal) {
      seed.ell[i] = eps_internal;
    }
  }
  return seed;
}

ProjectionResult project_within_orthant(const Eigen::MatrixXd& s0, const Topology& t,
                                        const Eigen::VectorXd& ell_init,
                                        const ProjectionOptions& opts) {
  if (static_cast<int>(t.size()) != ell_init.size()) {
    throw std::invalid_argument("one length per split required");
  }
  Chart chart = make_chart(t, ell_init, {}, opts.pendant_floor);
  return run_descent(s0, std::move(chart), /*global=*/false, opts);
}

ProjectionResult project_global(const Eigen::MatrixXd& s0, const ResolvedSeed& seed,
                                const ProjectionOptions& opts) {
  Chart chart = make_chart(seed.topology, seed.ell, seed.frozen, opts.pendant_floor);
  return run_descent(s0, std::move(chart), /*global=*/true, opts);
}

ProjectionResult project_global(const Eigen::MatrixXd& s0, const Wald& w_init,
                                const ProjectionOptions& opts) {
  return project_global(s0, resolve_representative(w_init), opts);
}

std::vector<Topology> all_resolved_topologies(int n_leaves) {
  if (n_leaves < 2) throw std::invalid_argument("need at least two leaves");
  std::vector<ForestGraph> shapes;
  {
    ForestGraph g(n_leaves);
    g.add_edge(g.leaf_vertex(1), g.leaf_vertex(2), 0.5);
    shapes.push_back(g);
  }
  for (int u = 3; u <= n_leaves; ++u) {
    std::vector<ForestGraph> grown;
    for (const auto& g : shapes) {
      for (std::size_t edge = 0; edge < g.edges().size(); ++edge) {
        ForestGraph next(n_leaves);
        for (int v = g.n_leaves(); v < g.n_vertices(); ++v) next.add_internal_vertex();
        int mid = next.add_internal_vertex();
        for (std::size_t i = 0; i < g.edges().size(); ++i) {
          const auto& e = g.edges()[i];
          if (i == edge) {
            next.add_edge(e.a, mid, 0.5);
            next.add_edge(mid, e.b, 0.5);
          } else {
            next.add_edge(e.a, e.b, e.lambda);
          }
        }
        next.add_edge(next.leaf_vertex(u), mid, 0.5);
        grown.push_back(next);
      }
    }
    shapes = std::move(grown);
  }
  std::vector<Topology> out;
  out.reserve(shapes.size());
  for (const auto& g : shapes) out.push_back(split_decomposition(g).first);
  return out;
}

ProjectionResult project_exhaustive(const Eigen::MatrixXd& s0, int n_leaves,
                                    double ell_init_value, const ProjectionOptions& opts) {
  ProjectionResult best;
  best.distance = kInfinity;
  for (const Topology& t : all_resolved_topologies(n_leaves)) {
    Eigen::VectorXd ell = Eigen::VectorXd::Constant(static_cast<int>(t.size()), ell_init_value);
    ProjectionResult candidate = project_within_orthant(s0, t, ell, opts);
    if (candidate.distance < best.distance) best = std::move(candidate);
  }
  return best;
}

}  // namespace waldgeo
