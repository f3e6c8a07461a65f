#pragma once

#include <vector>

#include "waldgeo/gaussian_metric.hpp"
#include "waldgeo/wald.hpp"

namespace waldgeo {

struct ProjectionOptions {
  int max_iter = 1000;
  double tol = 1e-8;            // gradient norm for convergence
  double alpha0 = 1e-2;         // first step and fallback step size
  double pendant_floor = 1e-8;  // pendant lengths are clamped here
  int boundary_guard = 10;      // max crossings of one BHV boundary
};

// Fully resolved tree chart for the optimizer: a topology with one length
// per split.  Coordinates with weight 1 (infinite length) are frozen: they
// parametrize the boundary stratum of a disconnected seed and are held
// fixed during descent.
struct ResolvedSeed {
  Topology topology;
  Eigen::VectorXd ell;        // +inf on frozen coordinates
  std::vector<char> frozen;
};

// Fully resolved single-tree representative of any wald: components are
// reconnected through weight-1 edges and multifurcations are resolved with
// internal edges of length eps_internal.
ResolvedSeed resolve_representative(const Wald& w, double eps_internal = 1e-6);

struct ProjectionResult {
  Wald wald;
  double distance = 0.0;  // d_cov(S0, S_wald)
  int iterations = 0;
  std::vector<Topology> orthant_path;  // starts at the seed topology
  bool converged = false;
  ResolvedSeed state;  // final optimizer chart, reusable as the next seed
};

// Gradient descent on d_cov(S0, S_ell)^2 with Barzilai-Borwein steps,
// confined to the orthant of t: assigning a nonpositive internal length
// halts the descent at the last interior iterate (converged = false).
ProjectionResult project_within_orthant(const Eigen::MatrixXd& s0, const Topology& t,
                                        const Eigen::VectorXd& ell_init,
                                        const ProjectionOptions& opts = {});

// As above, but an internal edge driven negative triggers a move into one
// of the two NNI neighbour orthants: all lengths take their absolute value
// and descent continues in whichever neighbour is closer to s0.  Crossings
// are recorded in orthant_path; crossing one boundary more than
// boundary_guard times stops at the best iterate seen.
ProjectionResult project_global(const Eigen::MatrixXd& s0, const ResolvedSeed& seed,
                                const ProjectionOptions& opts = {});
ProjectionResult project_global(const Eigen::MatrixXd& s0, const Wald& w_init,
                                const ProjectionOptions& opts = {});

// Within-orthant projection run over every fully resolved topology
// (feasible for small N), keeping the best result.
ProjectionResult project_exhaustive(const Eigen::MatrixXd& s0, int n_leaves,
                                    double ell_init_value = 0.5,
                                    const ProjectionOptions& opts = {});

// All fully resolved topologies on n_leaves, via sequential edge splitting;
// (2N-5)!! of them, so keep n_leaves small.
std::vector<Topology> all_resolved_topologies(int n_leaves);

}  // namespace waldgeo
