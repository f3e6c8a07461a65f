#include "waldgeo/spd.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace waldgeo::spd {

namespace {

constexpr double kEigenvalueFloor = 1e-12;
constexpr double kSymmetryTol = 1e-12;

void require_symmetric(const Eigen::MatrixXd& s, const char* what) {
  if (s.rows() != s.cols()) throw NumericError(std::string(what) + ": matrix is not square");
  double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
    throw NumericError(std::string(what) + ": matrix is not symmetric");
  }
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigs_of(const Eigen::MatrixXd& s,
                                                       const char* what, bool need_pd) {
  require_symmetric(s, what);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()));
  if (need_pd && !(es.eigenvalues().minCoeff() > kEigenvalueFloor)) {
    throw NumericError(std::string(what) + ": matrix is not positive definite (min eigenvalue " +
                       std::to_string(es.eigenvalues().minCoeff()) + ")");
  }
  return es;
}

Eigen::MatrixXd apply(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& es,
                      double (*fn)(double)) {
  Eigen::VectorXd mapped = es.eigenvalues();
  for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped[i] = fn(mapped[i]);
  return es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

bool is_spd(const Eigen::MatrixXd& s) {
  try {
    eigs_of(s, "is_spd", true);
  } catch (const NumericError&) {
    return false;
  }
  return true;
}

void require_spd(const Eigen::MatrixXd& s, const char* what) { eigs_of(s, what, true); }

Eigen::MatrixXd sqrt(const Eigen::MatrixXd& s) {
  return apply(eigs_of(s, "spd sqrt", true), +[](double x) { return std::sqrt(x); });
}

Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& s) {
  return apply(eigs_of(s, "spd inverse sqrt", true), +[](double x) { return 1.0 / std::sqrt(x); });
}

Eigen::MatrixXd log(const Eigen::MatrixXd& s) {
  return apply(eigs_of(s, "spd log", true), +[](double x) { return std::log(x); });
}

Eigen::MatrixXd exp(const Eigen::MatrixXd& s) {
  return apply(eigs_of(s, "symmetric exp", false), +[](double x) { return std::exp(x); });
}

Eigen::MatrixXd inverse(const Eigen::MatrixXd& s) {
  return apply(eigs_of(s, "spd inverse", true), +[](double x) { return 1.0 / x; });
}

double distance(const Eigen::MatrixXd& s1, const Eigen::MatrixXd& s2) {
  Eigen::MatrixXd r = inverse_sqrt(s1);
  Eigen::MatrixXd w = r * s2 * r;
  auto es = eigs_of(w, "spd distance", true);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double l = std::log(es.eigenvalues()[i]);
    sum += l * l;
  }
  return std::sqrt(0.5 * sum);
}

Eigen::MatrixXd geodesic(const Eigen::MatrixXd& s1, const Eigen::MatrixXd& s2, double t) {
  Eigen::MatrixXd root = sqrt(s1);
  Eigen::MatrixXd root_inv = inverse_sqrt(s1);
  Eigen::MatrixXd u = log(root_inv * s2 * root_inv);
  return root * exp(t * u) * root;
}

Eigen::MatrixXd frechet_mean(const std::vector<Eigen::MatrixXd>& samples,
                             const FrechetOptions& opts) {
  if (samples.empty()) throw std::invalid_argument("frechet mean of an empty sample");
  for (const auto& s : samples) require_spd(s, "frechet sample");
  Eigen::MatrixXd mean = samples[0];
  for (std::size_t i = 1; i < samples.size(); ++i) mean += samples[i];
  mean /= static_cast<double>(samples.size());

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    Eigen::MatrixXd root = sqrt(mean);
    Eigen::MatrixXd root_inv = inverse_sqrt(mean);
    Eigen::MatrixXd tangent = Eigen::MatrixXd::Zero(mean.rows(), mean.cols());
    for (const auto& s : samples) tangent += log(root_inv * s * root_inv);
    tangent /= static_cast<double>(samples.size());
    if (tangent.norm() < opts.tol) return mean;
    mean = root * exp(tangent) * root;
  }
  throw ConvergenceError("frechet mean did not converge in " + std::to_string(opts.max_iter) +
                         " iterations");
}

}  // namespace waldgeo::spd
