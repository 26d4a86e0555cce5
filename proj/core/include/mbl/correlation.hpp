#ifndef MBL_CORRELATION_HPP
#define MBL_CORRELATION_HPP

#include <Eigen/Core>
#include <string>

namespace mbl {

enum class CorrStructure { kIndependence, kExchangeable, kUnstructured };

/// Working correlation choice plus the current alpha estimate. For the
/// exchangeable structure alpha is a scalar; for unstructured it is a K x K
/// symmetric matrix with unit diagonal.
struct WorkingCorrelation {
  CorrStructure structure = CorrStructure::kIndependence;
  double alpha = 0.0;
  Eigen::MatrixXd alpha_matrix;

  static WorkingCorrelation independence() { return {}; }
  static WorkingCorrelation exchangeable(double alpha = 0.0);
  static WorkingCorrelation unstructured(Eigen::MatrixXd r = {});

  /// The correlation matrix R for K responses.
  Eigen::MatrixXd matrix(int k) const;
};

CorrStructure corr_structure_from_name(const std::string& name);  // indep/exch/unstr
std::string corr_structure_name(CorrStructure s);

/// Lower PD bound for the exchangeable alpha: -1/(K-1).
double exchangeable_alpha_lower(int k);

/// Clips alpha into (-1/(K-1) + 1e-3, 1 - 1e-3) so R stays positive
/// definite.
double project_alpha(double alpha, int k);

/// Eigenvalue-clips a pooled correlation matrix to positive definiteness
/// and restores the unit diagonal.
Eigen::MatrixXd project_correlation_matrix(const Eigen::MatrixXd& r);

/// V = A^{1/2} R A^{1/2} with A = diag(pi_k (1 - pi_k)). Symmetric by
/// construction; requires all pi strictly inside (0,1).
Eigen::MatrixXd working_cov(const Eigen::VectorXd& pi, const WorkingCorrelation& corr);

}  // namespace mbl

#endif
