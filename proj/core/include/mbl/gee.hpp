#ifndef MBL_GEE_HPP
#define MBL_GEE_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "mbl/correlation.hpp"
#include "mbl/dataset.hpp"
#include "mbl/mean_model.hpp"
#include "mbl/model.hpp"

namespace mbl {

/// Ordered list of disjoint coefficient-index sets covering 0..p-1.
struct BlockingScheme {
  std::vector<std::vector<int>> blocks;

  static BlockingScheme single(int p);
  int count() const { return static_cast<int>(blocks.size()); }
  void validate(int p) const;  // throws std::invalid_argument
};

/// The real-data grouping: one block for the curve coefficients (a, b),
/// then one block per response's link coefficients.
BlockingScheme grouped_blocks(const ModelSpec& spec);

/// Scheme B-II for the shared-curvature model: mean block + curvature.
BlockingScheme shared_beta_mean_curvature_blocks(int n_responses);

/// Scheme B-III: one block per response pair (c_0k, c_1k) + curvature.
BlockingScheme shared_beta_per_response_blocks(int n_responses);

struct FitOptions {
  double tol = 0.01;   // relative-difference stopping rule
  int max_iter = 200;
  int max_threads = 0;  // 0 = hardware limit, capped by LATENT_MBL_THREADS
};

struct FitResult {
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd robust_cov;  // per-estimate sandwich covariance
  WorkingCorrelation corr;     // structure with the final alpha estimate
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;  // relative difference per iteration
  int p = 0;                  // mean-parameter count
  std::optional<double> qic_u;

  Eigen::VectorXd std_errors() const { return robust_cov.diagonal().cwiseSqrt(); }
};

/// Moment estimator of the exchangeable correlation: pooled standardized
/// residual cross-products over all within-observation response pairs,
/// divided by N* - p. Returns the raw value (projection into the PD range
/// happens where R is built). Throws ConfigError when N* <= p.
double estimate_alpha(const MblDataset& data, const MeanModel& model,
                      const Eigen::VectorXd& theta, int p_mean);

/// Pairwise pooled residual correlations with an (N_obs - p) denominator
/// per pair; PD-projected before use.
Eigen::MatrixXd estimate_unstructured_correlation(const MblDataset& data, const MeanModel& model,
                                                  const Eigen::VectorXd& theta, int p_mean);

/// Re-estimates alpha (or the unstructured matrix) at theta for the given
/// structure; independence passes through.
WorkingCorrelation resolve_correlation(const MblDataset& data, const MeanModel& model,
                                       CorrStructure structure, const Eigen::VectorXd& theta);

/// The estimating-function vector sum_ij D' V^{-1} (Y_ij - pi_ij) at theta,
/// with V built from the supplied (already resolved) correlation.
Eigen::VectorXd estimating_function(const MblDataset& data, const MeanModel& model,
                                    const WorkingCorrelation& corr, const Eigen::VectorXd& theta);

/// One full Fisher-scoring update of all coefficients; alpha is
/// re-estimated from theta first when the structure requires it.
Eigen::VectorXd gee_step_full(const MblDataset& data, const MeanModel& model,
                              CorrStructure structure, const Eigen::VectorXd& theta,
                              const FitOptions& opts = {});

/// One sweep of blocked scoring: blocks are updated in order, each with
/// the earlier blocks already at their new values; each solve inverts only
/// the block-restricted normal matrix.
Eigen::VectorXd gee_step_blocked(const MblDataset& data, const MeanModel& model,
                                 CorrStructure structure, const Eigen::VectorXd& theta,
                                 const BlockingScheme& scheme, const FitOptions& opts = {});

/// Iterates blocked scoring until ||theta_j - theta_{j-1}|| / ||theta_j||
/// <= tol or max_iter; fills the robust covariance. Throws DivergenceError
/// when the relative difference grows for 5 consecutive iterations or the
/// iterate turns non-finite.
FitResult fit(const MblDataset& data, const MeanModel& model, const BlockingScheme& scheme,
              CorrStructure structure, const Eigen::VectorXd& init, const FitOptions& opts = {});

/// Sandwich covariance M^{-1} B M^{-1} with the outer-product plug-in for
/// Cov(Y_ij); symmetric positive semidefinite by construction.
Eigen::MatrixXd robust_variance(const MblDataset& data, const MeanModel& model,
                                CorrStructure structure, const Eigen::VectorXd& theta,
                                const FitOptions& opts = {});

/// Starting point for the latent model: a_0 = log 1.5, b_0 = log 3, other
/// curve coefficients 0; per-response (c_0k, c_1k) from an OLS fit of
/// windowed empirical frequencies on the initial curve values over the
/// grid t_j = 2j/100, j = 1..49; higher-order link coefficients 0.
/// Requires m_k >= 1 for every response. Grid points whose window holds no
/// observations are dropped; fewer than 2 surviving points is an
/// InitializationError.
ParamVector init_params(const MblDataset& data, const ModelSpec& spec, double bandwidth = 0.1,
                        std::vector<double> grid = {});

/// Starting point for the shared-curvature model: per-response quadratic
/// logistic regression in t; (c_0k, c_1k) from the intercept and linear
/// coefficient, curvature from the average of the per-response ratios
/// (quadratic / linear).
Eigen::VectorXd init_shared_beta(const MblDataset& data);

// Latent-model conveniences.
FitResult fit_latent(const MblDataset& data, const ModelSpec& spec, const BlockingScheme& scheme,
                     CorrStructure structure, const ParamVector& init, const FitOptions& opts = {});

}  // namespace mbl

#endif
