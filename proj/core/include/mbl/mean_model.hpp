#ifndef MBL_MEAN_MODEL_HPP
#define MBL_MEAN_MODEL_HPP

#include <Eigen/Core>
#include <memory>
#include <string>
#include <vector>

#include "mbl/model.hpp"

namespace mbl {

/// Mean model for the estimating equations: maps (t, d, theta) to the
/// K-vector of response probabilities and its K x p Jacobian in theta.
/// Implementations must be pure in their inputs (safe for concurrent use).
class MeanModel {
 public:
  virtual ~MeanModel() = default;

  virtual int response_count() const = 0;
  virtual int param_count() const = 0;
  virtual std::vector<std::string> param_names() const = 0;

  /// Fills pi (size K); when jac is non-null also fills the K x p Jacobian.
  virtual void evaluate(double t, double d, const Eigen::VectorXd& theta, Eigen::VectorXd& pi,
                        Eigen::MatrixXd* jac) const = 0;

  Eigen::VectorXd mean(double t, double d, const Eigen::VectorXd& theta) const;
  Eigen::MatrixXd jacobian(double t, double d, const Eigen::VectorXd& theta) const;
};

/// The latent-curve family: probabilities from polynomial links in the
/// intensity curve, whose exponents are duration polynomials.
class LatentBetaModel final : public MeanModel {
 public:
  explicit LatentBetaModel(ModelSpec spec);

  int response_count() const override { return spec_.n_responses; }
  int param_count() const override { return spec_.param_count(); }
  std::vector<std::string> param_names() const override;
  void evaluate(double t, double d, const Eigen::VectorXd& theta, Eigen::VectorXd& pi,
                Eigen::MatrixXd* jac) const override;

  const ModelSpec& spec() const { return spec_; }
  ParamVector unflatten(const Eigen::VectorXd& theta) const;

 private:
  ModelSpec spec_;
};

/// Generator/estimation coefficients for the reduced shared-curvature form
/// logit(pi_k) = c_0k + c_1k (t + beta t^2).
struct SharedBetaParams {
  Eigen::VectorXd intercepts;  // c_01..c_0K
  Eigen::VectorXd slopes;      // c_11..c_1K
  double curvature = 0.0;      // beta

  int n_responses() const { return static_cast<int>(intercepts.size()); }
  /// Flat order (c_01, c_11, c_02, c_12, ..., c_0K, c_1K, beta).
  Eigen::VectorXd flatten() const;
  static SharedBetaParams from_flat(const Eigen::VectorXd& flat);
  double pi(double t, int k) const;
};

/// Reduced model with per-response intercept/slope and one curvature
/// parameter shared across responses; p = 2K + 1.
class SharedBetaModel final : public MeanModel {
 public:
  explicit SharedBetaModel(int n_responses);

  int response_count() const override { return k_; }
  int param_count() const override { return 2 * k_ + 1; }
  std::vector<std::string> param_names() const override;
  void evaluate(double t, double d, const Eigen::VectorXd& theta, Eigen::VectorXd& pi,
                Eigen::MatrixXd* jac) const override;

 private:
  int k_;
};

}  // namespace mbl

#endif
