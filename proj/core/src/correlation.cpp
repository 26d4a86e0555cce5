#include "mbl/correlation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mbl {

WorkingCorrelation WorkingCorrelation::exchangeable(double alpha) {
  WorkingCorrelation c;
  c.structure = CorrStructure::kExchangeable;
  c.alpha = alpha;
  return c;
}

WorkingCorrelation WorkingCorrelation::unstructured(Eigen::MatrixXd r) {
  WorkingCorrelation c;
  c.structure = CorrStructure::kUnstructured;
  c.alpha_matrix = std::move(r);
  return c;
}

Eigen::MatrixXd WorkingCorrelation::matrix(int k) const {
  switch (structure) {
    case CorrStructure::kIndependence:
      return Eigen::MatrixXd::Identity(k, k);
    case CorrStructure::kExchangeable: {
      Eigen::MatrixXd r = Eigen::MatrixXd::Constant(k, k, alpha);
      r.diagonal().setOnes();
      return r;
    }
    case CorrStructure::kUnstructured:
      if (alpha_matrix.rows() != k || alpha_matrix.cols() != k)
        throw std::invalid_argument("WorkingCorrelation: alpha matrix is not K x K");
      return alpha_matrix;
  }
  throw std::logic_error("WorkingCorrelation: bad structure");
}

CorrStructure corr_structure_from_name(const std::string& name) {
  if (name == "indep" || name == "independence") return CorrStructure::kIndependence;
  if (name == "exch" || name == "exchangeable") return CorrStructure::kExchangeable;
  if (name == "unstr" || name == "unstructured") return CorrStructure::kUnstructured;
  throw std::invalid_argument("unknown correlation structure: " + name);
}

std::string corr_structure_name(CorrStructure s) {
  switch (s) {
    case CorrStructure::kIndependence:
      return "independence";
    case CorrStructure::kExchangeable:
      return "exchangeable";
    case CorrStructure::kUnstructured:
      return "unstructured";
  }
  return "?";
}

double exchangeable_alpha_lower(int k) {
  return k > 1 ? -1.0 / (k - 1) : -1.0;
}

double project_alpha(double alpha, int k) {
  const double margin = 1e-3;
  const double lo = exchangeable_alpha_lower(k) + margin;
  const double hi = 1.0 - margin;
  return std::clamp(alpha, lo, hi);
}

Eigen::MatrixXd project_correlation_matrix(const Eigen::MatrixXd& r) {
  Eigen::MatrixXd sym = 0.5 * (r + r.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  const double floor = 1e-6;
  if (eig.eigenvalues().minCoeff() >= floor) {
    sym.diagonal().setOnes();
    return sym;
  }
  Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(floor);
  Eigen::MatrixXd fixed = eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
  // renormalize back to a correlation matrix
  Eigen::VectorXd scale = fixed.diagonal().cwiseSqrt().cwiseInverse();
  fixed = scale.asDiagonal() * fixed * scale.asDiagonal();
  fixed.diagonal().setOnes();
  return 0.5 * (fixed + fixed.transpose());
}

Eigen::MatrixXd working_cov(const Eigen::VectorXd& pi, const WorkingCorrelation& corr) {
  const int k = static_cast<int>(pi.size());
  for (int i = 0; i < k; ++i)
    if (!(pi[i] > 0.0 && pi[i] < 1.0))
      throw std::invalid_argument("working_cov: probabilities must lie strictly inside (0,1)");
  const Eigen::VectorXd sd = (pi.array() * (1.0 - pi.array())).sqrt().matrix();
  Eigen::MatrixXd v = sd.asDiagonal() * corr.matrix(k) * sd.asDiagonal();
  return 0.5 * (v + v.transpose());
}

}  // namespace mbl
