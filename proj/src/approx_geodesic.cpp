#include "waldgeo/approx_geodesic.hpp"

#include <stdexcept>
#include <string>

#include "waldgeo/spd.hpp"

namespace waldgeo {

namespace {

void finish(ApproxGeodesic& g) {
  g.segment_lengths.clear();
  g.total_length = 0.0;
  for (std::size_t i = 1; i < g.points.size(); ++i) {
    double seg = extrinsic_cov_distance(g.points[i - 1], g.points[i]);
    g.segment_lengths.push_back(seg);
    g.total_length += seg;
  }
}

ProjectionResult project_step(const Eigen::MatrixXd& target, const ResolvedSeed& seed,
                              const ProjectionOptions& opts, int step) {
  try {
    return project_global(target, seed, opts);
  } catch (const std::exception& err) {
    throw ConvergenceError("projection failed at step " + std::to_string(step) + ": " +
                           err.what());
  }
}

}  // namespace

ApproxGeodesic recursive_geodesic(const Wald& w1, const Wald& w2, const ConnectOptions& opts) {
  if (w1.n_leaves() != w2.n_leaves()) {
    throw std::invalid_argument("walds must share the leaf set");
  }
  if (opts.k < 1) throw std::invalid_argument("k must be positive");
  ApproxGeodesic out;
  out.points.push_back(w1);
  ResolvedSeed seed = resolve_representative(w1, opts.resolve_eps);
  const Eigen::MatrixXd destination = covariance_of(w2);
  for (int i = 1; i <= opts.k - 1; ++i) {
    Eigen::MatrixXd current = covariance_of(out.points.back());
    Eigen::MatrixXd target = spd::geodesic(current, destination, 1.0 / (opts.k - i + 1));
    ProjectionResult projected = project_step(target, seed, opts.projection, i);
    seed = projected.state;
    out.points.push_back(projected.wald);
  }
  out.points.push_back(w2);
  finish(out);
  return out;
}

ApproxGeodesic symmetrized_geodesic(const Wald& w1, const Wald& w2, const ConnectOptions& opts) {
  if (w1.n_leaves() != w2.n_leaves()) {
    throw std::invalid_argument("walds must share the leaf set");
  }
  if (opts.k < 1) throw std::invalid_argument("k must be positive");
  std::vector<Wald> from_start = {w1}, from_end = {w2};
  ResolvedSeed seed_start = resolve_representative(w1, opts.resolve_eps);
  ResolvedSeed seed_end = resolve_representative(w2, opts.resolve_eps);
  for (int i = 1; i <= opts.k - 1; ++i) {
    Eigen::MatrixXd s_start = covariance_of(from_start.back());
    Eigen::MatrixXd s_end = covariance_of(from_end.back());
    double proportion = 1.0 / (opts.k - i + 1);
    Eigen::MatrixXd toward_start = spd::geodesic(s_start, s_end, proportion);
    Eigen::MatrixXd toward_end = spd::geodesic(s_start, s_end, 1.0 - proportion);
    ProjectionResult g = project_step(toward_start, seed_start, opts.projection, i);
    ProjectionResult h = project_step(toward_end, seed_end, opts.projection, i);
    seed_start = g.state;
    seed_end = h.state;
    from_start.push_back(g.wald);
    from_end.push_back(h.wald);
  }
  ApproxGeodesic out;
  out.points = std::move(from_start);
  for (auto it = from_end.rbegin(); it != from_end.rend(); ++it) out.points.push_back(*it);
  finish(out);
  return out;
}

double approx_intrinsic_distance(const ApproxGeodesic& g) { return g.total_length; }

Wald star_profile_source(double lambda0) {
  if (!(lambda0 > 0.0 && lambda0 <= 1.0)) {
    throw std::invalid_argument("lambda0 must lie in (0,1]");
  }
  const LeafSet all = all_leaves(4);
  std::vector<Split> splits;
  for (int u = 1; u <= 4; ++u) splits.emplace_back(all & ~leaf_bit(u), all);
  splits.emplace_back(leaf_bit(3) | leaf_bit(4), all);
  Topology t(4, std::move(splits));
  return Wald(t, std::vector<double>(t.size(), lambda0));
}

Wald star_tree(int n_leaves, double lambda) {
  if (lambda == 1.0) {
    // Canonical form at the boundary at infinity: all pendant edges are
    // deleted, leaving isolated leaves.
    return Wald(Topology(n_leaves, {}), {});
  }
  const LeafSet all = all_leaves(n_leaves);
  std::vector<Split> splits;
  for (int u = 1; u <= n_leaves; ++u) splits.emplace_back(all & ~leaf_bit(u), all);
  Topology t(n_leaves, std::move(splits));
  return Wald(t, std::vector<double>(t.size(), lambda));
}

std::vector<std::pair<double, double>> star_distance_profile(double lambda0,
                                                             const std::vector<double>& grid,
                                                             const ConnectOptions& opts) {
  Wald source = star_profile_source(lambda0);
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.size());
  for (double lambda : grid) {
    if (!(lambda > 0.0)) {
      throw std::invalid_argument("star profile grid must stay strictly above 0");
    }
    Wald star = star_tree(4, lambda);
    ApproxGeodesic path = symmetrized_geodesic(source, star, opts);
    out.emplace_back(lambda, approx_intrinsic_distance(path));
  }
  return out;
}

}  // namespace waldgeo
