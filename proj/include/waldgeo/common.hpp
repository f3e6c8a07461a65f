#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace waldgeo {

// Leaves are numbered 1..N with N <= 64; leaf u occupies bit u-1.
using LeafSet = std::uint64_t;

inline constexpr int kMaxLeaves = 64;

inline LeafSet leaf_bit(int leaf) { return LeafSet{1} << (leaf - 1); }

inline LeafSet all_leaves(int n) {
  return n == kMaxLeaves ? ~LeafSet{0} : (LeafSet{1} << n) - 1;
}

inline int popcount(LeafSet s) { return __builtin_popcountll(s); }

// Lowest-numbered leaf in a nonempty set.
inline int lowest_leaf(LeafSet s) { return __builtin_ctzll(s) + 1; }

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Edge weight parametrizations: length ell in [0, inf], weight lambda in
// [0, 1] with lambda = 1 - exp(-ell), and mu = 1 - lambda = exp(-ell).
enum class Parametrization { kLength, kLambda };

inline double lambda_from_length(double ell) {
  if (ell < 0.0 || std::isnan(ell)) {
    throw std::invalid_argument("edge length must be nonnegative, got " + std::to_string(ell));
  }
  // -expm1(-ell) keeps full precision for small ell.
  return std::isinf(ell) ? 1.0 : -std::expm1(-ell);
}

inline double length_from_lambda(double lambda) {
  if (lambda < 0.0 || lambda > 1.0 || std::isnan(lambda)) {
    throw std::invalid_argument("edge weight must lie in [0,1], got " + std::to_string(lambda));
  }
  return lambda == 1.0 ? kInfinity : -std::log1p(-lambda);
}

inline double mu_from_lambda(double lambda) {
  if (lambda < 0.0 || lambda > 1.0 || std::isnan(lambda)) {
    throw std::invalid_argument("edge weight must lie in [0,1], got " + std::to_string(lambda));
  }
  return 1.0 - lambda;
}

// Newick syntax failure; offset is the byte position in the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Violation of the forest conditions (coincident leaves, bad degrees, ...).
class InvalidWaldError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure: non-PD matrix, singular metric, guard violation.
class NumericError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iteration budget exhausted without meeting the tolerance.
class ConvergenceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace waldgeo
