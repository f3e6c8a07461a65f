// Command line front end: parsing/canonicalization, distances, geodesic
// shooting, projection, approximate geodesics, curvature sampling, Frechet
// means and the metric comparison report.
//
// Exit codes: 0 ok, 2 usage, 3 parse/invalid input, 4 numeric failure,
// 5 non-convergence.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "waldgeo/approx_geodesic.hpp"
#include "waldgeo/bhv.hpp"
#include "waldgeo/gaussian_metric.hpp"
#include "waldgeo/geodesic.hpp"
#include "waldgeo/io.hpp"
#include "waldgeo/newick.hpp"
#include "waldgeo/projection.hpp"
#include "waldgeo/random_wald.hpp"
#include "waldgeo/spd.hpp"
#include "waldgeo/tree_metrics.hpp"
#include "waldgeo/two_state.hpp"
#include "waldgeo/two_state_metric.hpp"

namespace {

using namespace waldgeo;
using nlohmann::json;

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
  std::string param = "length";

  Parametrization parametrization() const {
    return param == "lambda" ? Parametrization::kLambda : Parametrization::kLength;
  }
};

// One output sink per run; files are opened lazily.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open output file " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Tree arguments are file paths when such a file exists, otherwise they are
// taken as literal Newick text.
Wald load_wald(const std::string& arg, Parametrization param) {
  std::ifstream probe(arg);
  return parse_wald(probe ? slurp(arg) : arg, param);
}

Eigen::MatrixXd load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return read_matrix_csv(in);
}

Eigen::VectorXd chart_point(const Wald& w, const std::string& chart) {
  Eigen::VectorXd x(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    x[i] = chart == "lambda" ? w.lambda_of(i) : length_from_lambda(w.lambda_of(i));
  }
  return x;
}

std::shared_ptr<const MetricProvider> make_provider(const Topology& t, const std::string& model,
                                                    const std::string& chart) {
  std::shared_ptr<const MetricProvider> base;
  if (model == "twostate") {
    base = std::make_shared<TwoStateFisherMetric>(t);
  } else {
    base = std::make_shared<GaussianTreeMetric>(t);
  }
  if (chart == "lambda") return std::make_shared<LambdaChart>(base);
  return base;
}

std::vector<int> slice_indices(const Topology& t, const std::string& slice) {
  std::vector<int> internals = t.internal_indices();
  if (slice.empty()) {
    if (internals.size() != 2) {
      throw std::runtime_error("the direction fan needs exactly two internal edges; "
                               "pick two with --slice");
    }
    return internals;
  }
  std::vector<int> out;
  std::stringstream ss(slice);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int ordinal = std::stoi(item);
    if (ordinal < 0 || ordinal >= static_cast<int>(internals.size())) {
      throw std::runtime_error("slice ordinal out of range");
    }
    out.push_back(internals[ordinal]);
  }
  if (out.size() != 2) throw std::runtime_error("--slice needs two comma-separated ordinals");
  return out;
}

json path_to_json(const GeodesicPath& path) {
  json samples = json::array();
  for (std::size_t i = 0; i < path.samples.size(); ++i) {
    json row;
    row["t"] = path.samples[i].t;
    row["x"] = std::vector<double>(path.samples[i].x.data(),
                                   path.samples[i].x.data() + path.samples[i].x.size());
    row["cumlen"] = path.cumulative_length[i];
    samples.push_back(row);
  }
  return json{{"samples", samples}, {"termination", to_string(path.termination)}};
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------- commands

int cmd_parse(const GlobalOptions& g, const std::vector<std::string>& trees) {
  Sink sink(g.out);
  for (const auto& arg : trees) {
    Wald w = load_wald(arg, g.parametrization());
    sink.os() << to_newick(w, g.parametrization()) << "\n";
  }
  return 0;
}

int cmd_dist(const GlobalOptions& g, const std::string& metric, const std::string& a,
             const std::string& b) {
  Wald wa = load_wald(a, g.parametrization());
  Wald wb = load_wald(b, g.parametrization());
  double value = 0.0;
  switch (tree_metric_from_string(metric)) {
    case TreeMetric::kJs: value = extrinsic_distance(wa, wb, ProbMetric::kJs); break;
    case TreeMetric::kHellinger: value = extrinsic_distance(wa, wb, ProbMetric::kHellinger); break;
    case TreeMetric::kCov: value = extrinsic_cov_distance(wa, wb); break;
    case TreeMetric::kBhv: value = bhv_distance(wa, wb); break;
    case TreeMetric::kPathDiff: value = path_difference_distance(wa, wb); break;
  }
  Sink sink(g.out);
  if (g.format == "json") {
    sink.os() << json{{"metric", metric}, {"distance", value}}.dump() << "\n";
  } else {
    sink.os() << format_double(value) << "\n";
  }
  return 0;
}

int cmd_pmf(const GlobalOptions& g, const std::string& tree, int cap) {
  Wald w = load_wald(tree, g.parametrization());
  CharacterDistribution dist = full_distribution(w, cap);
  Sink sink(g.out);
  if (g.format == "json") {
    json probs = json::array();
    for (std::size_t s = 0; s < dist.size(); ++s) probs.push_back(dist[s]);
    sink.os() << json{{"n_leaves", dist.n_leaves()}, {"probs", probs}}.dump() << "\n";
  } else {
    write_distribution_csv(sink.os(), dist);
  }
  return 0;
}

int cmd_shoot(const GlobalOptions& g, const std::string& tree, const std::string& model,
              const std::string& chart, int directions, double dt, double max_time,
              const std::string& slice, bool no_clamp) {
  Wald w = load_wald(tree, g.parametrization());
  auto provider = make_provider(w.topology(), model, chart);
  Eigen::VectorXd x0 = chart_point(w, chart);
  std::vector<int> axes = slice_indices(w.topology(), slice);

  Sink sink(g.out);
  std::vector<std::string> header = {"direction", "t"};
  for (int i = 1; i <= provider->dimension(); ++i) header.push_back("x_" + std::to_string(i));
  header.push_back("cumlen");
  header.push_back("termination");
  if (g.format == "csv") write_csv_row(sink.os(), header);

  json all = json::array();
  for (int d = 0; d < directions; ++d) {
    double angle = 2.0 * M_PI * d / directions;
    Eigen::VectorXd v0 = Eigen::VectorXd::Zero(provider->dimension());
    v0[axes[0]] = std::cos(angle);
    v0[axes[1]] = std::sin(angle);
    GeodesicPath path = shoot_geodesic(*provider, x0, v0, {dt, max_time, !no_clamp});
    if (g.format == "json") {
      json entry = path_to_json(path);
      entry["direction"] = d;
      all.push_back(entry);
      continue;
    }
    for (std::size_t i = 0; i < path.samples.size(); ++i) {
      std::vector<std::string> row = {std::to_string(d), format_double(path.samples[i].t)};
      for (int k = 0; k < provider->dimension(); ++k) {
        row.push_back(format_double(path.samples[i].x[k]));
      }
      row.push_back(format_double(path.cumulative_length[i]));
      row.push_back(i + 1 == path.samples.size() ? to_string(path.termination) : "");
      write_csv_row(sink.os(), row);
    }
  }
  if (g.format == "json") sink.os() << all.dump() << "\n";
  return 0;
}

// Boundary-value variant: pick the shooting direction in the 2-D internal
// slice by a scan plus golden-section refinement of the closest approach.
GeodesicPath shoot_to_target(const MetricProvider& provider, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& target, const std::vector<int>& axes,
                             double dt, double max_time, double* best_angle) {
  auto closest_approach = [&](double angle, GeodesicPath* keep) {
    Eigen::VectorXd v0 = Eigen::VectorXd::Zero(x0.size());
    v0[axes[0]] = std::cos(angle);
    v0[axes[1]] = std::sin(angle);
    GeodesicPath path = shoot_geodesic(provider, x0, v0, {dt, max_time, true});
    double best = kInfinity;
    std::size_t best_at = 0;
    for (std::size_t i = 0; i < path.samples.size(); ++i) {
      double d = (path.samples[i].x - target).norm();
      if (d < best) {
        best = d;
        best_at = i;
      }
    }
    if (keep) {
      path.samples.resize(best_at + 1);
      path.cumulative_length.resize(best_at + 1);
      *keep = path;
    }
    return best;
  };

  const int scan = 64;
  double best_theta = 0.0, best_value = kInfinity;
  for (int i = 0; i < scan; ++i) {
    double theta = 2.0 * M_PI * i / scan;
    double value = closest_approach(theta, nullptr);
    if (value < best_value) {
      best_value = value;
      best_theta = theta;
    }
  }
  double lo = best_theta - 2.0 * M_PI / scan, hi = best_theta + 2.0 * M_PI / scan;
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
  double f1 = closest_approach(x1, nullptr), f2 = closest_approach(x2, nullptr);
  for (int it = 0; it < 48; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - golden * (hi - lo);
      f1 = closest_approach(x1, nullptr);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + golden * (hi - lo);
      f2 = closest_approach(x2, nullptr);
    }
  }
  double theta = f1 < f2 ? x1 : x2;
  GeodesicPath path;
  closest_approach(theta, &path);
  if (best_angle) *best_angle = theta;
  return path;
}

int cmd_connect(const GlobalOptions& g, const std::string& algorithm, const std::string& a,
                const std::string& b, int k, const std::string& model, const std::string& chart,
                double dt, double max_time) {
  Wald wa = load_wald(a, g.parametrization());
  Wald wb = load_wald(b, g.parametrization());
  Sink sink(g.out);
  if (algorithm == "ode") {
    if (!(wa.topology() == wb.topology())) {
      throw std::invalid_argument("ode connection needs endpoints in one orthant");
    }
    auto provider = make_provider(wa.topology(), model, chart);
    std::vector<int> axes = slice_indices(wa.topology(), "");
    Eigen::VectorXd x0 = chart_point(wa, chart), x1 = chart_point(wb, chart);
    GeodesicPath path = shoot_to_target(*provider, x0, x1, axes, dt, max_time, nullptr);
    if (g.format == "json") {
      json out = path_to_json(path);
      out["endpoint_error"] = (path.back().x - x1).norm();
      sink.os() << out.dump() << "\n";
    } else {
      write_path_csv(sink.os(), path);
    }
    return 0;
  }

  ConnectOptions opts;
  opts.k = k;
  ApproxGeodesic path = algorithm == "recursive" ? recursive_geodesic(wa, wb, opts)
                                                 : symmetrized_geodesic(wa, wb, opts);
  if (g.format == "json") {
    json points = json::array();
    for (const auto& w : path.points) points.push_back(to_newick(w, g.parametrization()));
    sink.os() << json{{"points", points},
                      {"segment_lengths", path.segment_lengths},
                      {"total_length", path.total_length}}
                     .dump()
              << "\n";
  } else {
    write_approx_geodesic_csv(sink.os(), path);
    if (!g.out.empty()) {
      std::ofstream sidecar(g.out + ".topologies", std::ios::binary);
      write_topology_sidecar(sidecar, path);
    } else {
      write_topology_sidecar(sink.os(), path);
    }
  }
  return 0;
}

int cmd_project(const GlobalOptions& g, const std::string& mode, const std::string& target_path,
                const std::string& seed_tree, int n_leaves, double ell_init) {
  Eigen::MatrixXd target = load_matrix(target_path);
  ProjectionResult res;
  if (mode == "exhaustive") {
    int n = n_leaves > 0 ? n_leaves : static_cast<int>(target.rows());
    res = project_exhaustive(target, n, ell_init);
  } else {
    if (seed_tree.empty()) throw std::runtime_error("--seed-tree is required for this mode");
    Wald seed = load_wald(seed_tree, g.parametrization());
    if (mode == "orthant") {
      auto lens = seed.lengths();
      res = project_within_orthant(target, seed.topology(),
                                   Eigen::Map<const Eigen::VectorXd>(lens.data(), lens.size()));
    } else {
      res = project_global(target, seed);
    }
  }
  Sink sink(g.out);
  if (g.format == "json") {
    json orthants = json::array();
    for (const auto& t : res.orthant_path) orthants.push_back(t.to_string());
    sink.os() << json{{"wald", to_newick(res.wald, g.parametrization())},
                      {"distance", res.distance},
                      {"iterations", res.iterations},
                      {"converged", res.converged},
                      {"orthant_path", orthants}}
                     .dump()
              << "\n";
  } else {
    write_csv_row(sink.os(), {"wald", "distance", "iterations", "converged", "orthants_visited"});
    write_csv_row(sink.os(), {"\"" + to_newick(res.wald, g.parametrization()) + "\"",
                              format_double(res.distance), std::to_string(res.iterations),
                              res.converged ? "1" : "0",
                              std::to_string(res.orthant_path.size())});
  }
  return res.converged ? 0 : 5;
}

int cmd_curvature(const GlobalOptions& g, const std::string& tree, const std::string& model,
                  int samples) {
  Wald w = load_wald(tree, g.parametrization());
  auto provider = make_provider(w.topology(), model, "length");
  const int d = provider->dimension();
  std::mt19937_64 rng(g.seed);
  std::uniform_real_distribution<double> point_dist(0.2, 1.5);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Sink sink(g.out);
  if (g.format == "csv") write_csv_row(sink.os(), {"sample", "curvature"});
  json values = json::array();
  int positive = 0, negative = 0;
  for (int i = 0; i < samples; ++i) {
    Eigen::VectorXd x(d), u(d), v(d);
    for (int j = 0; j < d; ++j) {
      x[j] = point_dist(rng);
      u[j] = gauss(rng);
      v[j] = gauss(rng);
    }
    double kappa = sectional_curvature(*provider, x, u, v);
    positive += kappa > 0;
    negative += kappa < 0;
    if (g.format == "json") {
      values.push_back(kappa);
    } else {
      write_csv_row(sink.os(), {std::to_string(i), format_double(kappa)});
    }
  }
  if (g.format == "json") {
    sink.os() << json{{"curvatures", values}, {"positive", positive}, {"negative", negative}}.dump()
              << "\n";
  } else {
    write_csv_row(sink.os(), {"positive", std::to_string(positive)});
    write_csv_row(sink.os(), {"negative", std::to_string(negative)});
  }
  return 0;
}

int cmd_frechet(const GlobalOptions& g, const std::vector<std::string>& inputs, bool project,
                const std::string& seed_tree) {
  std::vector<Eigen::MatrixXd> sample;
  std::optional<Wald> first_tree;
  for (const auto& arg : inputs) {
    if (arg.size() > 4 && arg.substr(arg.size() - 4) == ".csv") {
      sample.push_back(load_matrix(arg));
    } else {
      Wald w = load_wald(arg, g.parametrization());
      if (!first_tree) first_tree = w;
      sample.push_back(covariance_of(w));
    }
  }
  Eigen::MatrixXd mean = spd::frechet_mean(sample);

  Sink sink(g.out);
  std::optional<ProjectionResult> projected;
  if (project) {
    if (!seed_tree.empty()) {
      projected = project_global(mean, load_wald(seed_tree, g.parametrization()));
    } else if (first_tree) {
      projected = project_global(mean, *first_tree);
    } else {
      projected = project_exhaustive(mean, static_cast<int>(mean.rows()));
    }
  }
  if (g.format == "json") {
    json out{{"mean", matrix_to_json(mean)}};
    if (projected) {
      out["projected_wald"] = to_newick(projected->wald, g.parametrization());
      out["projected_distance"] = projected->distance;
    }
    sink.os() << out.dump() << "\n";
  } else {
    write_matrix_csv(sink.os(), mean);
    if (projected) {
      write_csv_row(sink.os(), {"projected_wald",
                                "\"" + to_newick(projected->wald, g.parametrization()) + "\"",
                                format_double(projected->distance)});
    }
  }
  return 0;
}

int cmd_star_profile(const GlobalOptions& g, double lambda0, double grid_min, double grid_max,
                     int grid_count, bool log_grid, int k) {
  std::vector<double> grid;
  for (int i = 0; i < grid_count; ++i) {
    double f = grid_count == 1 ? 0.0 : static_cast<double>(i) / (grid_count - 1);
    grid.push_back(log_grid ? grid_min * std::pow(grid_max / grid_min, f)
                            : grid_min + f * (grid_max - grid_min));
  }
  ConnectOptions opts;
  opts.k = k;
  auto profile = star_distance_profile(lambda0, grid, opts);
  Sink sink(g.out);
  if (g.format == "json") {
    json rows = json::array();
    for (auto [lambda, distance] : profile) {
      rows.push_back(json{{"lambda", lambda}, {"distance", distance}});
    }
    sink.os() << rows.dump() << "\n";
  } else {
    write_csv_row(sink.os(), {"lambda", "distance"});
    for (auto [lambda, distance] : profile) {
      write_csv_row(sink.os(), {format_double(lambda), format_double(distance)});
    }
  }
  return 0;
}

int cmd_compare(const GlobalOptions& g, const std::vector<std::string>& inputs,
                const std::string& metric_list, int random_count, int random_leaves,
                double jitter) {
  std::vector<Wald> trees;
  for (const auto& arg : inputs) trees.push_back(load_wald(arg, g.parametrization()));
  std::mt19937_64 rng(g.seed);
  if (random_count > 0) {
    Wald base = random_wald(random_leaves, rng);
    trees.push_back(base);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int i = 1; i < random_count; ++i) {
      std::vector<double> lambda = base.lambda();
      for (auto& l : lambda) {
        l = std::clamp(l * (1.0 + jitter * unit(rng)), 0.01, 0.99);
      }
      trees.emplace_back(base.topology(), lambda);
    }
  }
  std::vector<TreeMetric> metrics;
  {
    std::stringstream ss(metric_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "tropical") {
        std::cerr << "note: the tropical metric is not implemented; skipping\n";
        continue;
      }
      metrics.push_back(tree_metric_from_string(item));
    }
  }
  DistanceMatrixReport report = compare_metrics(trees, metrics);

  Sink sink(g.out);
  if (g.format == "json") {
    json out;
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      out["matrices"][to_string(metrics[m])] = matrix_to_json(report.matrices[m]);
    }
    out["correlations"] = matrix_to_json(report.correlations);
    sink.os() << out.dump() << "\n";
    return 0;
  }
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    write_csv_row(sink.os(), {"metric", to_string(metrics[m])});
    write_matrix_csv(sink.os(), report.matrices[m]);
  }
  write_csv_row(sink.os(), {"correlations"});
  std::vector<std::string> head = {""};
  for (TreeMetric m : metrics) head.push_back(to_string(m));
  write_csv_row(sink.os(), head);
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    std::vector<std::string> row = {to_string(metrics[i])};
    for (std::size_t j = 0; j < metrics.size(); ++j) {
      row.push_back(format_double(report.correlations(i, j)));
    }
    write_csv_row(sink.os(), row);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geometries of the space of phylogenetic forests"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--param", g.param, "newick weight interpretation")
      ->check(CLI::IsMember({"length", "lambda"}))
      ->capture_default_str();

  // parse
  std::vector<std::string> parse_trees;
  auto* c_parse = app.add_subcommand("parse", "validate and canonicalize newick input");
  c_parse->add_option("trees", parse_trees, "newick files or literals")->required();

  // dist
  std::string dist_metric = "cov", dist_a, dist_b;
  auto* c_dist = app.add_subcommand("dist", "distance between two walds");
  c_dist->add_option("--metric", dist_metric, "js|hellinger|cov|bhv|pathdiff")
      ->capture_default_str();
  c_dist->add_option("a", dist_a)->required();
  c_dist->add_option("b", dist_b)->required();

  // pmf
  std::string pmf_tree;
  int pmf_cap = kDistributionCap;
  auto* c_pmf = app.add_subcommand("pmf", "character distribution dump");
  c_pmf->add_option("tree", pmf_tree)->required();
  c_pmf->add_option("--cap", pmf_cap, "leaf count cap")->capture_default_str();

  // shoot
  std::string shoot_tree, shoot_model = "gaussian", shoot_chart = "length", shoot_slice;
  int shoot_directions = 24;
  double shoot_dt = 1e-3, shoot_time = 2.0;
  bool shoot_no_clamp = false;
  auto* c_shoot = app.add_subcommand("shoot", "fan of geodesics from a tree");
  c_shoot->add_option("tree", shoot_tree)->required();
  c_shoot->add_option("--model", shoot_model)->check(CLI::IsMember({"twostate", "gaussian"}));
  c_shoot->add_option("--chart", shoot_chart)->check(CLI::IsMember({"length", "lambda"}));
  c_shoot->add_option("--directions", shoot_directions)->capture_default_str();
  c_shoot->add_option("--dt", shoot_dt)->capture_default_str();
  c_shoot->add_option("--time", shoot_time)->capture_default_str();
  c_shoot->add_option("--slice", shoot_slice, "two internal-edge ordinals, e.g. 0,1");
  c_shoot->add_flag("--no-clamp", shoot_no_clamp, "stop at pendant zero instead of clamping");

  // connect
  std::string conn_algorithm = "symmetrized", conn_a, conn_b;
  std::string conn_model = "gaussian", conn_chart = "length";
  int conn_k = 32;
  double conn_dt = 1e-3, conn_time = 5.0;
  auto* c_conn = app.add_subcommand("connect", "approximate geodesic between two walds");
  c_conn->add_option("--algorithm", conn_algorithm)
      ->check(CLI::IsMember({"recursive", "symmetrized", "ode"}))
      ->capture_default_str();
  c_conn->add_option("a", conn_a)->required();
  c_conn->add_option("b", conn_b)->required();
  c_conn->add_option("--k", conn_k)->capture_default_str();
  c_conn->add_option("--model", conn_model)->check(CLI::IsMember({"twostate", "gaussian"}));
  c_conn->add_option("--chart", conn_chart)->check(CLI::IsMember({"length", "lambda"}));
  c_conn->add_option("--dt", conn_dt)->capture_default_str();
  c_conn->add_option("--time", conn_time)->capture_default_str();

  // project
  std::string proj_mode = "global", proj_target, proj_seed_tree;
  int proj_leaves = 0;
  double proj_ell_init = 0.5;
  auto* c_proj = app.add_subcommand("project", "project a covariance matrix onto the forest space");
  c_proj->add_option("--mode", proj_mode)
      ->check(CLI::IsMember({"orthant", "global", "exhaustive"}))
      ->capture_default_str();
  c_proj->add_option("--target", proj_target, "square CSV matrix")->required();
  c_proj->add_option("--seed-tree", proj_seed_tree);
  c_proj->add_option("--leaves", proj_leaves, "leaf count for exhaustive mode");
  c_proj->add_option("--ell-init", proj_ell_init)->capture_default_str();

  // curvature
  std::string curv_tree, curv_model = "gaussian";
  int curv_samples = 100;
  auto* c_curv = app.add_subcommand("curvature", "sectional curvature sampling report");
  c_curv->add_option("tree", curv_tree)->required();
  c_curv->add_option("--model", curv_model)->check(CLI::IsMember({"twostate", "gaussian"}));
  c_curv->add_option("--samples", curv_samples)->capture_default_str();

  // frechet
  std::vector<std::string> frechet_inputs;
  bool frechet_project = false;
  std::string frechet_seed_tree;
  auto* c_frechet = app.add_subcommand("frechet", "frechet mean of covariances");
  c_frechet->add_option("inputs", frechet_inputs, "newick trees or .csv matrices")->required();
  c_frechet->add_flag("--project", frechet_project, "project the mean back to the forest space");
  c_frechet->add_option("--seed-tree", frechet_seed_tree);

  // star-profile
  double star_lambda0 = 0.5, star_min = 0.02, star_max = 0.98;
  int star_count = 25, star_k = 32;
  bool star_log = false;
  auto* c_star = app.add_subcommand("star-profile", "distance profile to the star stratum");
  c_star->add_option("--lambda0", star_lambda0)->required();
  c_star->add_option("--grid-min", star_min)->capture_default_str();
  c_star->add_option("--grid-max", star_max)->capture_default_str();
  c_star->add_option("--grid-count", star_count)->capture_default_str();
  c_star->add_flag("--log-grid", star_log);
  c_star->add_option("--k", star_k)->capture_default_str();

  // compare
  std::vector<std::string> cmp_inputs;
  std::string cmp_metrics = "js,hellinger,cov,bhv,pathdiff";
  int cmp_random = 0, cmp_leaves = 6;
  double cmp_jitter = 0.3;
  auto* c_cmp = app.add_subcommand("compare", "pairwise distance matrices and correlations");
  c_cmp->add_option("trees", cmp_inputs, "newick files or literals");
  c_cmp->add_option("--metrics", cmp_metrics)->capture_default_str();
  c_cmp->add_option("--random", cmp_random, "append this many perturbed random trees");
  c_cmp->add_option("--leaves", cmp_leaves)->capture_default_str();
  c_cmp->add_option("--jitter", cmp_jitter)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c_parse) return cmd_parse(g, parse_trees);
    if (*c_dist) return cmd_dist(g, dist_metric, dist_a, dist_b);
    if (*c_pmf) return cmd_pmf(g, pmf_tree, pmf_cap);
    if (*c_shoot) {
      return cmd_shoot(g, shoot_tree, shoot_model, shoot_chart, shoot_directions, shoot_dt,
                       shoot_time, shoot_slice, shoot_no_clamp);
    }
    if (*c_conn) {
      return cmd_connect(g, conn_algorithm, conn_a, conn_b, conn_k, conn_model, conn_chart,
                         conn_dt, conn_time);
    }
    if (*c_proj) {
      return cmd_project(g, proj_mode, proj_target, proj_seed_tree, proj_leaves, proj_ell_init);
    }
    if (*c_curv) return cmd_curvature(g, curv_tree, curv_model, curv_samples);
    if (*c_frechet) return cmd_frechet(g, frechet_inputs, frechet_project, frechet_seed_tree);
    if (*c_star) {
      return cmd_star_profile(g, star_lambda0, star_min, star_max, star_count, star_log, star_k);
    }
    if (*c_cmp) return cmd_compare(g, cmp_inputs, cmp_metrics, cmp_random, cmp_leaves, cmp_jitter);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const InvalidWaldError& e) {
    std::cerr << "invalid forest: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 4;
  } catch (const ConvergenceError& e) {
    std::cerr << "did not converge: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
