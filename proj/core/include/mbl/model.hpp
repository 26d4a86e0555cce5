#ifndef MBL_MODEL_HPP
#define MBL_MODEL_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

namespace mbl {

/// Polynomial orders defining one member of the model family: K responses,
/// duration polynomials of orders m_a and m_b for the two curve exponents,
/// and a link polynomial of order m_k per response.
struct ModelSpec {
  int n_responses = 0;          // K
  int order_a = 0;              // m_a
  int order_b = 0;              // m_b
  std::vector<int> order_link;  // m_1..m_K

  /// Total mean-parameter count p = (m_a+1) + (m_b+1) + sum_k (m_k+1).
  int param_count() const;
  void validate() const;  // throws std::invalid_argument

  /// The quadratic-everywhere starting model for backward selection.
  static ModelSpec full(int n_responses);

  bool operator==(const ModelSpec&) const = default;
};

/// Log-scale exponents of the intensity curve; r = e^a and s = e^b, so the
/// curve exponents stay positive for any real (a, b).
struct MaCurveParams {
  double a = 0.0;
  double b = 0.0;
};

/// Named contiguous range of the flat coefficient vector.
struct Block {
  std::string name;
  int offset = 0;
  int size = 0;
};

/// Coefficients for one ModelSpec. Flat order is
/// (a_0..a_ma, b_0..b_mb, c_01..c_m1,1, ..., c_0K..c_mK,K).
struct ParamVector {
  Eigen::VectorXd a_coeffs;
  Eigen::VectorXd b_coeffs;
  std::vector<Eigen::VectorXd> link_coeffs;

  ModelSpec spec() const;
  Eigen::VectorXd flatten() const;
  static ParamVector from_flat(const ModelSpec& spec, const Eigen::VectorXd& flat);
  static ParamVector zeros(const ModelSpec& spec);

  /// Ordered named ranges ("a", "b", "c1".."cK") partitioning the flat vector.
  std::vector<Block> block_layout() const;
  void validate() const;
};

/// Duration-dependent curve exponents a(d), b(d) from Horner evaluation of
/// the duration polynomials. Throws std::invalid_argument on non-finite
/// input.
MaCurveParams eval_ab(double d, const ParamVector& params);

/// Intensity t^(e^a - 1) * (1-t)^(e^b - 1) with t clamped to
/// [kTimeClamp, 1-kTimeClamp]. Finite and >= 0.
double eval_ma(double t, const MaCurveParams& ma);

/// Response probability expit(sum_j c_jk MA^j); strictly inside (0,1).
/// k is a 0-based response index.
double eval_pi(double t, double d, const ParamVector& params, int k);

/// All K response probabilities at (t, d).
Eigen::VectorXd eval_mean_vector(double t, double d, const ParamVector& params);

/// K x p analytic Jacobian of the mean vector with respect to the flat
/// coefficient vector. Rows for response k are zero in other responses'
/// link blocks.
Eigen::MatrixXd jacobian_mean(double t, double d, const ParamVector& params);

// JSON document with fields `orders` {a, b, link: [..]} and, when
// coefficients are present, `coefficients` {a: [..], b: [..], link: [[..]..]}.
std::string to_json(const ModelSpec& spec);
std::string to_json(const ModelSpec& spec, const ParamVector& params);
ModelSpec model_spec_from_json(const std::string& text);
ParamVector param_vector_from_json(const std::string& text);

}  // namespace mbl

#endif
