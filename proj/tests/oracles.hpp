// Independent reference implementations used to pin expected values.
// These deliberately avoid the library's estimation code paths.
#ifndef MBL_TESTS_ORACLES_HPP
#define MBL_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "mbl/dataset.hpp"
#include "mbl/mean_model.hpp"

namespace oracles {

/// Newton-solved logistic MLE on a dense design matrix, starting from zero.
Eigen::VectorXd newton_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                int max_iter = 100, double tol = 1e-12);

/// Bernoulli log-likelihood at probabilities expit(x beta).
double logistic_loglik(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& beta);

/// Central finite differences of a vector-valued function.
Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& theta, double step);

/// Brute-force Hosmer-Lemeshow: explicit bin membership lists over the
/// fixed-width bins (0.1(l-1), 0.1l] (first closed at 0), then the direct
/// chi-square sum. Returns one statistic per response; degenerate
/// responses (fewer than 2 nonempty bins) yield 0.
std::vector<double> brute_force_hl(const mbl::MblDataset& data, const mbl::MeanModel& model,
                                   const Eigen::VectorXd& theta);

/// Pooled design matrix (1, t, t^2) and outcome vector for one response.
void pooled_quadratic_design(const mbl::MblDataset& data, int response, Eigen::MatrixXd& x,
                             Eigen::VectorXd& y);

}  // namespace oracles

#endif
