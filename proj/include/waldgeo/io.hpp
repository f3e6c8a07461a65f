#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "waldgeo/approx_geodesic.hpp"
#include "waldgeo/geodesic.hpp"
#include "waldgeo/two_state.hpp"

namespace waldgeo {

// Numbers are printed with 17 significant digits; CSV rows follow RFC 4180
// (header row, CRLF line endings).

std::string format_double(double value);
void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

// Square matrix, plain-text CSV, row-major, no header.
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(std::istream& is);

// Columns: index, bits, prob.
void write_distribution_csv(std::ostream& os, const CharacterDistribution& dist);

// Columns: t, x_1..x_d, cumlen, termination.
void write_path_csv(std::ostream& os, const GeodesicPath& path);

// Rows (index, topology_id, lambda_1..lambda_m, seglen, cumlen) padded to
// the widest point; the sidecar maps topology ids to split sets.
void write_approx_geodesic_csv(std::ostream& os, const ApproxGeodesic& g);
void write_topology_sidecar(std::ostream& os, const ApproxGeodesic& g);

}  // namespace waldgeo
