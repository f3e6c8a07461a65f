#include "waldgeo/io.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <sstream>

namespace waldgeo {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ",";
    os << fields[i];
  }
  os << "\r\n";
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row;
    row.reserve(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(format_double(m(i, j)));
    write_csv_row(os, row);
  }
}

Eigen::MatrixXd read_matrix_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("empty matrix file");
  Eigen::MatrixXd m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw std::invalid_argument("ragged matrix file");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void write_distribution_csv(std::ostream& os, const CharacterDistribution& dist) {
  write_csv_row(os, {"index", "bits", "prob"});
  for (std::size_t s = 0; s < dist.size(); ++s) {
    write_csv_row(os, {std::to_string(s), character_bits(s, dist.n_leaves()),
                       format_double(dist[s])});
  }
}

void write_path_csv(std::ostream& os, const GeodesicPath& path) {
  const int d = path.samples.empty() ? 0 : static_cast<int>(path.samples.front().x.size());
  std::vector<std::string> header = {"t"};
  for (int i = 1; i <= d; ++i) header.push_back("x_" + std::to_string(i));
  header.push_back("cumlen");
  header.push_back("termination");
  write_csv_row(os, header);
  for (std::size_t i = 0; i < path.samples.size(); ++i) {
    std::vector<std::string> row = {format_double(path.samples[i].t)};
    for (int j = 0; j < d; ++j) row.push_back(format_double(path.samples[i].x[j]));
    row.push_back(format_double(path.cumulative_length[i]));
    row.push_back(i + 1 == path.samples.size() ? to_string(path.termination) : "");
    write_csv_row(os, row);
  }
}

namespace {

std::vector<int> topology_ids(const ApproxGeodesic& g, std::vector<const Topology*>& distinct) {
  std::vector<int> ids;
  for (const auto& w : g.points) {
    int id = -1;
    for (std::size_t i = 0; i < distinct.size(); ++i) {
      if (*distinct[i] == w.topology()) {
        id = static_cast<int>(i);
        break;
      }
    }
    if (id < 0) {
      distinct.push_back(&w.topology());
      id = static_cast<int>(distinct.size()) - 1;
    }
    ids.push_back(id);
  }
  return ids;
}

}  // namespace

void write_approx_geodesic_csv(std::ostream& os, const ApproxGeodesic& g) {
  std::size_t width = 0;
  for (const auto& w : g.points) width = std::max(width, w.size());
  std::vector<std::string> header = {"index", "topology_id"};
  for (std::size_t i = 1; i <= width; ++i) header.push_back("lambda_" + std::to_string(i));
  header.push_back("seglen");
  header.push_back("cumlen");
  write_csv_row(os, header);

  std::vector<const Topology*> distinct;
  std::vector<int> ids = topology_ids(g, distinct);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    double seg = i == 0 ? 0.0 : g.segment_lengths[i - 1];
    cumulative += seg;
    std::vector<std::string> row = {std::to_string(i), std::to_string(ids[i])};
    for (std::size_t j = 0; j < width; ++j) {
      row.push_back(j < g.points[i].size() ? format_double(g.points[i].lambda_of(j)) : "");
    }
    row.push_back(format_double(seg));
    row.push_back(format_double(cumulative));
    write_csv_row(os, row);
  }
}

void write_topology_sidecar(std::ostream& os, const ApproxGeodesic& g) {
  std::vector<const Topology*> distinct;
  topology_ids(g, distinct);
  write_csv_row(os, {"topology_id", "splits"});
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    write_csv_row(os, {std::to_string(i), "\"" + distinct[i]->to_string() + "\""});
  }
}

}  // namespace waldgeo
