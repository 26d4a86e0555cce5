#include "mbl/mean_model.hpp"

#include <stdexcept>

#include "mbl/numeric.hpp"

namespace mbl {

Eigen::VectorXd MeanModel::mean(double t, double d, const Eigen::VectorXd& theta) const {
  Eigen::VectorXd pi(response_count());
  evaluate(t, d, theta, pi, nullptr);
  return pi;
}

Eigen::MatrixXd MeanModel::jacobian(double t, double d, const Eigen::VectorXd& theta) const {
  Eigen::VectorXd pi(response_count());
  Eigen::MatrixXd jac(response_count(), param_count());
  evaluate(t, d, theta, pi, &jac);
  return jac;
}

LatentBetaModel::LatentBetaModel(ModelSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

std::vector<std::string> LatentBetaModel::param_names() const {
  std::vector<std::string> names;
  for (int j = 0; j <= spec_.order_a; ++j) names.push_back("a" + std::to_string(j));
  for (int j = 0; j <= spec_.order_b; ++j) names.push_back("b" + std::to_string(j));
  for (int k = 0; k < spec_.n_responses; ++k)
    for (int j = 0; j <= spec_.order_link[static_cast<std::size_t>(k)]; ++j)
      names.push_back("c" + std::to_string(j) + "," + std::to_string(k + 1));
  return names;
}

ParamVector LatentBetaModel::unflatten(const Eigen::VectorXd& theta) const {
  return ParamVector::from_flat(spec_, theta);
}

void LatentBetaModel::evaluate(double t, double d, const Eigen::VectorXd& theta,
                               Eigen::VectorXd& pi, Eigen::MatrixXd* jac) const {
  const ParamVector pv = unflatten(theta);
  pi = eval_mean_vector(t, d, pv);
  if (jac) *jac = jacobian_mean(t, d, pv);
}

Eigen::VectorXd SharedBetaParams::flatten() const {
  const int K = n_responses();
  Eigen::VectorXd v(2 * K + 1);
  for (int k = 0; k < K; ++k) {
    v[2 * k] = intercepts[k];
    v[2 * k + 1] = slopes[k];
  }
  v[2 * K] = curvature;
  return v;
}

SharedBetaParams SharedBetaParams::from_flat(const Eigen::VectorXd& flat) {
  if (flat.size() < 3 || flat.size() % 2 == 0)
    throw std::invalid_argument("SharedBetaParams: flat length must be 2K+1");
  const int K = static_cast<int>((flat.size() - 1) / 2);
  SharedBetaParams p;
  p.intercepts.resize(K);
  p.slopes.resize(K);
  for (int k = 0; k < K; ++k) {
    p.intercepts[k] = flat[2 * k];
    p.slopes[k] = flat[2 * k + 1];
  }
  p.curvature = flat[2 * K];
  return p;
}

double SharedBetaParams::pi(double t, int k) const {
  return expit(intercepts[k] + slopes[k] * (t + curvature * t * t));
}

SharedBetaModel::SharedBetaModel(int n_responses) : k_(n_responses) {
  if (k_ < 1) throw std::invalid_argument("SharedBetaModel: need K >= 1");
}

std::vector<std::string> SharedBetaModel::param_names() const {
  std::vector<std::string> names;
  for (int k = 1; k <= k_; ++k) {
    names.push_back("c0," + std::to_string(k));
    names.push_back("c1," + std::to_string(k));
  }
  names.push_back("beta");
  return names;
}

void SharedBetaModel::evaluate(double t, double /*d*/, const Eigen::VectorXd& theta,
                               Eigen::VectorXd& pi, Eigen::MatrixXd* jac) const {
  if (theta.size() != param_count())
    throw std::invalid_argument("SharedBetaModel: theta length mismatch");
  const double beta = theta[2 * k_];
  const double u = t + beta * t * t;
  pi.resize(k_);
  if (jac) jac->setZero(k_, param_count());
  for (int k = 0; k < k_; ++k) {
    const double c0 = theta[2 * k];
    const double c1 = theta[2 * k + 1];
    const double p = expit(c0 + c1 * u);
    pi[k] = p;
    if (jac) {
      const double w = p * (1.0 - p);
      (*jac)(k, 2 * k) = w;
      (*jac)(k, 2 * k + 1) = w * u;
      (*jac)(k, 2 * k_) = w * c1 * t * t;
    }
  }
}

}  // namespace mbl
