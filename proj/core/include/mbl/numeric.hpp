#ifndef MBL_NUMERIC_HPP
#define MBL_NUMERIC_HPP

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

namespace mbl {

// Standardized times are clamped away from {0,1} so that ln(t) and ln(1-t)
// stay finite in the curve and its gradient.
inline constexpr double kTimeClamp = 1e-6;

// Saturation bound for probabilities; expit never returns outside
// [kProbClamp, 1-kProbClamp] and logit saturates its argument to the same
// interval.
inline constexpr double kProbClamp = 1e-12;

inline double clamp_time(double t) {
  return std::clamp(t, kTimeClamp, 1.0 - kTimeClamp);
}

inline double clamp_prob(double p) {
  return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}

/// Overflow-safe inverse logit, saturated into (0,1).
inline double expit(double eta) {
  double p;
  if (eta >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-eta));
  } else {
    const double e = std::exp(eta);
    p = e / (1.0 + e);
  }
  return clamp_prob(p);
}

inline double logit(double p) {
  p = clamp_prob(p);
  return std::log(p / (1.0 - p));
}

/// Horner evaluation of sum_j coeffs[j] * x^j.
inline double horner(const Eigen::VectorXd& coeffs, double x) {
  double acc = 0.0;
  for (Eigen::Index j = coeffs.size() - 1; j >= 0; --j) acc = acc * x + coeffs[j];
  return acc;
}

/// Horner evaluation of the derivative sum_{j>=1} j*coeffs[j] * x^(j-1).
inline double horner_derivative(const Eigen::VectorXd& coeffs, double x) {
  double acc = 0.0;
  for (Eigen::Index j = coeffs.size() - 1; j >= 1; --j)
    acc = acc * x + static_cast<double>(j) * coeffs[j];
  return acc;
}

}  // namespace mbl

#endif
