#include "mbl/model.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>

#include "mbl/numeric.hpp"

namespace mbl {

using nlohmann::json;

int ModelSpec::param_count() const {
  int p = (order_a + 1) + (order_b + 1);
  for (int m : order_link) p += m + 1;
  return p;
}

void ModelSpec::validate() const {
  if (n_responses < 1) throw std::invalid_argument("ModelSpec: need K >= 1 responses");
  if (order_a < 0 || order_b < 0)
    throw std::invalid_argument("ModelSpec: polynomial orders must be non-negative");
  if (static_cast<int>(order_link.size()) != n_responses)
    throw std::invalid_argument("ModelSpec: order_link size must equal n_responses");
  for (int m : order_link)
    if (m < 0) throw std::invalid_argument("ModelSpec: polynomial orders must be non-negative");
}

ModelSpec ModelSpec::full(int n_responses) {
  ModelSpec s;
  s.n_responses = n_responses;
  s.order_a = 2;
  s.order_b = 2;
  s.order_link.assign(static_cast<std::size_t>(n_responses), 2);
  s.validate();
  return s;
}

ModelSpec ParamVector::spec() const {
  ModelSpec s;
  s.order_a = static_cast<int>(a_coeffs.size()) - 1;
  s.order_b = static_cast<int>(b_coeffs.size()) - 1;
  s.n_responses = static_cast<int>(link_coeffs.size());
  s.order_link.reserve(link_coeffs.size());
  for (const auto& c : link_coeffs) s.order_link.push_back(static_cast<int>(c.size()) - 1);
  return s;
}

void ParamVector::validate() const {
  if (a_coeffs.size() < 1 || b_coeffs.size() < 1 || link_coeffs.empty())
    throw std::invalid_argument("ParamVector: empty coefficient block");
  for (const auto& c : link_coeffs)
    if (c.size() < 1) throw std::invalid_argument("ParamVector: empty link block");
}

Eigen::VectorXd ParamVector::flatten() const {
  Eigen::VectorXd v(spec().param_count());
  Eigen::Index at = 0;
  v.segment(at, a_coeffs.size()) = a_coeffs;
  at += a_coeffs.size();
  v.segment(at, b_coeffs.size()) = b_coeffs;
  at += b_coeffs.size();
  for (const auto& c : link_coeffs) {
    v.segment(at, c.size()) = c;
    at += c.size();
  }
  return v;
}

ParamVector ParamVector::from_flat(const ModelSpec& spec, const Eigen::VectorXd& flat) {
  spec.validate();
  if (flat.size() != spec.param_count())
    throw std::invalid_argument("ParamVector: flat vector length does not match spec");
  ParamVector pv;
  Eigen::Index at = 0;
  pv.a_coeffs = flat.segment(at, spec.order_a + 1);
  at += spec.order_a + 1;
  pv.b_coeffs = flat.segment(at, spec.order_b + 1);
  at += spec.order_b + 1;
  pv.link_coeffs.reserve(spec.order_link.size());
  for (int m : spec.order_link) {
    pv.link_coeffs.push_back(flat.segment(at, m + 1));
    at += m + 1;
  }
  return pv;
}

ParamVector ParamVector::zeros(const ModelSpec& spec) {
  return from_flat(spec, Eigen::VectorXd::Zero(spec.param_count()));
}

std::vector<Block> ParamVector::block_layout() const {
  std::vector<Block> blocks;
  int at = 0;
  blocks.push_back({"a", at, static_cast<int>(a_coeffs.size())});
  at += static_cast<int>(a_coeffs.size());
  blocks.push_back({"b", at, static_cast<int>(b_coeffs.size())});
  at += static_cast<int>(b_coeffs.size());
  for (std::size_t k = 0; k < link_coeffs.size(); ++k) {
    blocks.push_back({"c" + std::to_string(k + 1), at, static_cast<int>(link_coeffs[k].size())});
    at += static_cast<int>(link_coeffs[k].size());
  }
  return blocks;
}

MaCurveParams eval_ab(double d, const ParamVector& params) {
  if (!std::isfinite(d)) throw std::invalid_argument("eval_ab: non-finite duration");
  if (!params.a_coeffs.allFinite() || !params.b_coeffs.allFinite())
    throw std::invalid_argument("eval_ab: non-finite coefficients");
  return {horner(params.a_coeffs, d), horner(params.b_coeffs, d)};
}

double eval_ma(double t, const MaCurveParams& ma) {
  if (!std::isfinite(t) || !std::isfinite(ma.a) || !std::isfinite(ma.b))
    throw std::invalid_argument("eval_ma: non-finite input");
  const double tc = clamp_time(t);
  const double r = std::exp(ma.a);
  const double s = std::exp(ma.b);
  // exp form keeps the value finite for any real exponents on the clamped
  // interior and matches the log-gradient used in jacobian_mean.
  return std::exp((r - 1.0) * std::log(tc) + (s - 1.0) * std::log1p(-tc));
}

double eval_pi(double t, double d, const ParamVector& params, int k) {
  if (k < 0 || k >= static_cast<int>(params.link_coeffs.size()))
    throw std::invalid_argument("eval_pi: response index out of range");
  const double ma = eval_ma(t, eval_ab(d, params));
  return expit(horner(params.link_coeffs[static_cast<std::size_t>(k)], ma));
}

Eigen::VectorXd eval_mean_vector(double t, double d, const ParamVector& params) {
  const double ma = eval_ma(t, eval_ab(d, params));
  Eigen::VectorXd pi(static_cast<Eigen::Index>(params.link_coeffs.size()));
  for (std::size_t k = 0; k < params.link_coeffs.size(); ++k)
    pi[static_cast<Eigen::Index>(k)] = expit(horner(params.link_coeffs[k], ma));
  return pi;
}

Eigen::MatrixXd jacobian_mean(double t, double d, const ParamVector& params) {
  const ModelSpec spec = params.spec();
  const int K = spec.n_responses;
  const int p = spec.param_count();
  const int na = spec.order_a + 1;
  const int nb = spec.order_b + 1;

  const MaCurveParams ab = eval_ab(d, params);
  const double tc = clamp_time(t);
  const double log_t = std::log(tc);
  const double log_1mt = std::log1p(-tc);
  const double r = std::exp(ab.a);
  const double s = std::exp(ab.b);
  const double ma = std::exp((r - 1.0) * log_t + (s - 1.0) * log_1mt);

  // powers of d for the duration polynomials
  Eigen::VectorXd dpow(std::max(na, nb));
  dpow[0] = 1.0;
  for (Eigen::Index j = 1; j < dpow.size(); ++j) dpow[j] = dpow[j - 1] * d;

  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(K, p);
  int link_at = na + nb;
  for (int k = 0; k < K; ++k) {
    const Eigen::VectorXd& c = params.link_coeffs[static_cast<std::size_t>(k)];
    const double eta = horner(c, ma);
    const double pi = expit(eta);
    const double w = pi * (1.0 - pi);
    const double eta_dma = horner_derivative(c, ma);
    const double dpi_da = w * eta_dma * ma * r * log_t;   // per unit of a
    const double dpi_db = w * eta_dma * ma * s * log_1mt;  // per unit of b
    for (int j = 0; j < na; ++j) jac(k, j) = dpi_da * dpow[j];
    for (int j = 0; j < nb; ++j) jac(k, na + j) = dpi_db * dpow[j];
    double ma_pow = 1.0;
    for (Eigen::Index j = 0; j < c.size(); ++j) {
      jac(k, link_at + static_cast<int>(j)) = w * ma_pow;
      ma_pow *= ma;
    }
    link_at += static_cast<int>(c.size());
  }
  return jac;
}

namespace {

json spec_to_json_obj(const ModelSpec& spec) {
  return json{{"a", spec.order_a}, {"b", spec.order_b}, {"link", spec.order_link}};
}

ModelSpec spec_from_json_obj(const json& orders) {
  ModelSpec spec;
  spec.order_a = orders.at("a").get<int>();
  spec.order_b = orders.at("b").get<int>();
  spec.order_link = orders.at("link").get<std::vector<int>>();
  spec.n_responses = static_cast<int>(spec.order_link.size());
  spec.validate();
  return spec;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

Eigen::VectorXd from_std(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string to_json(const ModelSpec& spec) {
  return json{{"orders", spec_to_json_obj(spec)}}.dump(2);
}

std::string to_json(const ModelSpec& spec, const ParamVector& params) {
  if (params.spec() != spec)
    throw std::invalid_argument("to_json: params do not match spec");
  json links = json::array();
  for (const auto& c : params.link_coeffs) links.push_back(to_std(c));
  json doc{{"orders", spec_to_json_obj(spec)},
           {"coefficients",
            {{"a", to_std(params.a_coeffs)}, {"b", to_std(params.b_coeffs)}, {"link", links}}}};
  return doc.dump(2);
}

ModelSpec model_spec_from_json(const std::string& text) {
  return spec_from_json_obj(json::parse(text).at("orders"));
}

ParamVector param_vector_from_json(const std::string& text) {
  const json doc = json::parse(text);
  const ModelSpec spec = spec_from_json_obj(doc.at("orders"));
  const json& co = doc.at("coefficients");
  ParamVector pv;
  pv.a_coeffs = from_std(co.at("a").get<std::vector<double>>());
  pv.b_coeffs = from_std(co.at("b").get<std::vector<double>>());
  for (const auto& c : co.at("link")) pv.link_coeffs.push_back(from_std(c.get<std::vector<double>>()));
  if (pv.spec() != spec)
    throw std::invalid_argument("param_vector_from_json: coefficients do not match orders");
  return pv;
}

}  // namespace mbl
