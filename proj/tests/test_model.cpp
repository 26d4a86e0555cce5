#include <doctest.h>

#include <cmath>
#include <random>

#include "mbl/model.hpp"
#include "mbl/numeric.hpp"
#include "oracles.hpp"

using namespace mbl;

namespace {

ParamVector make_params(const ModelSpec& spec, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  ParamVector pv = ParamVector::zeros(spec);
  for (Eigen::Index j = 0; j < pv.a_coeffs.size(); ++j) pv.a_coeffs[j] = 0.3 * normal(rng);
  for (Eigen::Index j = 0; j < pv.b_coeffs.size(); ++j) pv.b_coeffs[j] = 0.3 * normal(rng);
  for (auto& c : pv.link_coeffs)
    for (Eigen::Index j = 0; j < c.size(); ++j) c[j] = normal(rng);
  return pv;
}

ModelSpec random_spec(std::mt19937_64& rng, int max_k = 3) {
  std::uniform_int_distribution<int> orders(0, 2);
  std::uniform_int_distribution<int> ks(1, max_k);
  ModelSpec spec;
  spec.n_responses = ks(rng);
  spec.order_a = orders(rng);
  spec.order_b = orders(rng);
  for (int k = 0; k < spec.n_responses; ++k) spec.order_link.push_back(orders(rng));
  return spec;
}

}  // namespace

TEST_CASE("eval_ab evaluates the duration polynomials") {
  ModelSpec spec{1, 1, 2, {1}};
  ParamVector pv = ParamVector::zeros(spec);

  pv.a_coeffs << 0.3, 99.0;
  pv.b_coeffs << 0.0, 0.0, 0.0;
  CHECK(eval_ab(0.0, pv).a == doctest::Approx(0.3).epsilon(1e-14));

  pv.a_coeffs << 0.0658, 0.0045;  // frozen: 0.0658 + 0.0045*10 = 0.1108
  CHECK(eval_ab(10.0, pv).a == doctest::Approx(0.1108).epsilon(1e-12));

  pv.b_coeffs << 0.2410, 0.0454, 0.0001;  // frozen: 0.4705
  const MaCurveParams ab = eval_ab(5.0, pv);
  CHECK(ab.b == doctest::Approx(0.4705).epsilon(1e-12));
  // cross-check Horner against direct power summation
  double direct = 0.0;
  for (Eigen::Index j = 0; j < pv.b_coeffs.size(); ++j)
    direct += pv.b_coeffs[j] * std::pow(5.0, double(j));
  CHECK(ab.b == doctest::Approx(direct).epsilon(1e-14));

  CHECK_THROWS_AS(eval_ab(std::numeric_limits<double>::quiet_NaN(), pv), std::invalid_argument);
  pv.a_coeffs[0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(eval_ab(1.0, pv), std::invalid_argument);
}

TEST_CASE("eval_ma matches closed-form values") {
  CHECK(eval_ma(0.5, {std::log(2.0), std::log(2.0)}) == doctest::Approx(0.25).epsilon(1e-14));
  for (double t : {0.0, 0.1, 0.5, 0.77, 1.0})
    CHECK(eval_ma(t, {0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eval_ma(0.25, {std::log(1.5), std::log(3.0)}) == doctest::Approx(0.28125).epsilon(1e-13));
  // endpoints stay finite through clamping
  CHECK(std::isfinite(eval_ma(0.0, {-2.0, 3.0})));
  CHECK(std::isfinite(eval_ma(1.0, {3.0, -2.0})));
  CHECK(eval_ma(1.0, {0.0, 1.0}) >= 0.0);
}

TEST_CASE("eval_ma symmetry under (t,a,b) -> (1-t,b,a)") {
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> ts(0.01, 0.99), coef(-1.0, 1.5);
  for (int rep = 0; rep < 200; ++rep) {
    const double t = ts(rng), a = coef(rng), b = coef(rng);
    const double lhs = eval_ma(t, {a, b});
    const double rhs = eval_ma(1.0 - t, {b, a});
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("eval_ma mode sits at (r-1)/(r+s-2)") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(0.1, 2.0);
  const int grid_n = 20000;
  for (int rep = 0; rep < 20; ++rep) {
    const double a = coef(rng), b = coef(rng);  // e^a > 1, e^b > 1
    const double r = std::exp(a), s = std::exp(b);
    double best_t = 0.0, best = -1.0;
    for (int i = 1; i < grid_n; ++i) {
      const double t = double(i) / grid_n;
      const double v = eval_ma(t, {a, b});
      if (v > best) {
        best = v;
        best_t = t;
      }
    }
    const double mode = (r - 1.0) / (r + s - 2.0);
    CHECK(std::abs(best_t - mode) <= 1.5 / grid_n);
  }
}

TEST_CASE("eval_pi frozen values and range") {
  SUBCASE("all link coefficients zero give 1/2") {
    ModelSpec spec{2, 0, 0, {2, 1}};
    ParamVector pv = ParamVector::zeros(spec);
    for (double t : {0.0, 0.3, 1.0})
      for (double d : {0.5, 4.0}) {
        CHECK(eval_pi(t, d, pv, 0) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(eval_pi(t, d, pv, 1) == doctest::Approx(0.5).epsilon(1e-14));
      }
  }

  SUBCASE("intercept-only limit at MA = 0 hits the expit of the constant") {
    // e^a > 1 makes MA vanish as t -> 0; clamped t keeps it tiny but finite
    ModelSpec spec{1, 0, 0, {2}};
    ParamVector pv = ParamVector::zeros(spec);
    pv.a_coeffs << 1.0;
    pv.b_coeffs << 0.0;
    pv.link_coeffs[0] << -6.1432, 11.3835, -8.6876;
    // frozen by a 40-digit evaluation: expit(-6.1432)
    CHECK(eval_pi(0.0, 1.0, pv, 0) == doctest::Approx(0.0021434347030807465).epsilon(1e-6));
  }

  SUBCASE("unit-slope link at MA = 1/2") {
    // a = 0, b = log 2 gives MA(t) = 1 - t, so MA(0.5) = 0.5
    ModelSpec spec{1, 0, 0, {1}};
    ParamVector pv = ParamVector::zeros(spec);
    pv.b_coeffs << std::log(2.0);
    pv.link_coeffs[0] << 0.0, 1.0;
    // frozen: expit(0.5)
    CHECK(eval_pi(0.5, 1.0, pv, 0) == doctest::Approx(0.6224593312018546).epsilon(1e-12));
  }

  SUBCASE("always strictly inside (0,1)") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 100; ++rep) {
      ModelSpec spec = random_spec(rng);
      ParamVector pv = make_params(spec, rng, 8.0);  // extreme linear predictors
      std::uniform_real_distribution<double> ts(0.0, 1.0), ds(0.5, 39.5);
      const double t = ts(rng), d = ds(rng);
      for (int k = 0; k < spec.n_responses; ++k) {
        const double p = eval_pi(t, d, pv, k);
        CHECK(p > 0.0);
        CHECK(p < 1.0);
      }
    }
  }

  SUBCASE("response index is validated") {
    ModelSpec spec{1, 0, 0, {1}};
    ParamVector pv = ParamVector::zeros(spec);
    CHECK_THROWS_AS(eval_pi(0.5, 1.0, pv, 1), std::invalid_argument);
  }
}

TEST_CASE("expit/logit round-trip") {
  for (double ex = -12.0; ex <= -0.31; ex += 0.25) {
    const double p = std::pow(10.0, ex);
    CHECK(std::abs(expit(logit(p)) - p) <= 1e-12);
    CHECK(std::abs(expit(logit(1.0 - p)) - (1.0 - p)) <= 1e-12);
  }
}

TEST_CASE("eval_mean_vector is componentwise eval_pi") {
  SUBCASE("zeros") {
    ModelSpec spec{3, 0, 0, {1, 1, 1}};
    ParamVector pv = ParamVector::zeros(spec);
    const Eigen::VectorXd pi = eval_mean_vector(0.4, 2.0, pv);
    REQUIRE(pi.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(pi[k] == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("K = 1 reduces to eval_pi") {
    std::mt19937_64 rng(11);
    ModelSpec spec{1, 1, 1, {2}};
    ParamVector pv = make_params(spec, rng);
    CHECK(eval_mean_vector(0.3, 5.0, pv)[0] == eval_pi(0.3, 5.0, pv, 0));
  }
  SUBCASE("final-model-scale parameters, componentwise recomputation") {
    // orders as in the selected real-data model: m_a = 1, m_b = 2,
    // mixed quadratic/linear links
    ModelSpec spec{3, 1, 2, {2, 2, 1}};
    ParamVector pv = ParamVector::zeros(spec);
    pv.a_coeffs << 0.0658, 0.0045;
    pv.b_coeffs << 0.2410, 0.0454, 0.0001;
    pv.link_coeffs[0] << -6.1432, 11.3835, -8.6876;
    pv.link_coeffs[1] << -1.6569, -2.0083, 3.4437;
    pv.link_coeffs[2] << -5.0790, 3.1491;
    const Eigen::VectorXd pi = eval_mean_vector(0.2, 2.0, pv);
    for (int k = 0; k < 3; ++k) CHECK(pi[k] == eval_pi(0.2, 2.0, pv, k));
  }
}

TEST_CASE("jacobian_mean closed-form spot checks") {
  SUBCASE("zero links put 0.25 * MA^j in the link blocks and 0 elsewhere") {
    ModelSpec spec{2, 1, 0, {2, 1}};
    ParamVector pv = ParamVector::zeros(spec);
    pv.a_coeffs << 0.2, 0.05;
    pv.b_coeffs << 0.7;
    const double t = 0.3, d = 4.0;
    const double ma = eval_ma(t, eval_ab(d, pv));
    const Eigen::MatrixXd jac = jacobian_mean(t, d, pv);
    REQUIRE(jac.rows() == 2);
    REQUIRE(jac.cols() == spec.param_count());
    // curve-coefficient columns vanish because eta'(MA) = 0
    CHECK(jac.block(0, 0, 2, 3).cwiseAbs().maxCoeff() == 0.0);
    // response 1 link block: columns 3..5
    for (int j = 0; j <= 2; ++j)
      CHECK(jac(0, 3 + j) == doctest::Approx(0.25 * std::pow(ma, j)).epsilon(1e-13));
    CHECK(jac(0, 6) == 0.0);
    CHECK(jac(0, 7) == 0.0);
    // response 2 link block: columns 6..7, zero in response 1's block
    CHECK(jac(1, 3) == 0.0);
    for (int j = 0; j <= 1; ++j)
      CHECK(jac(1, 6 + j) == doctest::Approx(0.25 * std::pow(ma, j)).epsilon(1e-13));
  }

  SUBCASE("t = 1/2 with a = b = 0 makes a- and b-columns coincide") {
    ModelSpec spec{1, 1, 1, {2}};
    ParamVector pv = ParamVector::zeros(spec);
    pv.link_coeffs[0] << 0.4, 1.2, -0.3;
    const Eigen::MatrixXd jac = jacobian_mean(0.5, 3.0, pv);
    for (int j = 0; j < 2; ++j) {
      CHECK(jac(0, j) == doctest::Approx(jac(0, 2 + j)).epsilon(1e-14));
      CHECK(std::signbit(jac(0, j)) == std::signbit(jac(0, 2 + j)));
    }
  }
}

TEST_CASE("jacobian_mean matches central finite differences") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ts(0.05, 0.95), ds(0.5, 10.0);
  const double step = 1e-6;
  for (int rep = 0; rep < 100; ++rep) {
    const ModelSpec spec = random_spec(rng);
    const ParamVector pv = make_params(spec, rng);
    const double t = ts(rng), d = ds(rng);
    const Eigen::VectorXd theta = pv.flatten();
    const Eigen::MatrixXd analytic = jacobian_mean(t, d, pv);
    const Eigen::MatrixXd fd = oracles::fd_jacobian(
        [&](const Eigen::VectorXd& th) {
          return eval_mean_vector(t, d, ParamVector::from_flat(spec, th));
        },
        theta, step);
    for (Eigen::Index i = 0; i < analytic.rows(); ++i)
      for (Eigen::Index j = 0; j < analytic.cols(); ++j) {
        const double a = analytic(i, j), f = fd(i, j);
        const double scale = std::max({std::abs(a), std::abs(f), 1e-3});
        if (std::abs(a - f) > 1e-9)  // absolute floor near zeros
          CHECK(std::abs(a - f) / scale <= 1e-6);
      }
  }
}

TEST_CASE("numerical identifiability on a (t,d) grid") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  auto sup_difference = [](const ParamVector& p1, const ParamVector& p2) {
    double sup = 0.0;
    for (int it = 0; it < 50; ++it)
      for (int id = 0; id < 20; ++id) {
        const double t = (it + 0.5) / 50.0;
        const double d = 0.5 + id * 0.45;
        const Eigen::VectorXd pi1 = eval_mean_vector(t, d, p1);
        const Eigen::VectorXd pi2 = eval_mean_vector(t, d, p2);
        sup = std::max(sup, (pi1 - pi2).cwiseAbs().maxCoeff());
      }
    return sup;
  };

  for (int rep = 0; rep < 100; ++rep) {
    ModelSpec spec = random_spec(rng, 2);
    for (auto& m : spec.order_link) m = std::max(m, 1);  // generic: slopes present
    ParamVector p1 = make_params(spec, rng);
    ParamVector p2 = make_params(spec, rng);
    for (auto& c : p1.link_coeffs)
      if (c[1] == 0.0) c[1] = 0.5;
    for (auto& c : p2.link_coeffs)
      if (c[1] == 0.0) c[1] = -0.5;
    CHECK(sup_difference(p1, p2) > 1e-8);
    CHECK(sup_difference(p1, p1) == 0.0);
  }
}

TEST_CASE("model spec and parameter JSON round-trip") {
  std::mt19937_64 rng(55);
  const ModelSpec spec{2, 1, 2, {2, 0}};
  const ParamVector pv = make_params(spec, rng);

  const ModelSpec spec2 = model_spec_from_json(to_json(spec));
  CHECK(spec2 == spec);

  const ParamVector pv2 = param_vector_from_json(to_json(spec, pv));
  CHECK(pv2.flatten() == pv.flatten());  // exact: JSON doubles round-trip

  CHECK_THROWS(model_spec_from_json("{\"orders\": {\"a\": -1, \"b\": 0, \"link\": [1]}}"));
}

TEST_CASE("block layout partitions the flat vector") {
  const ModelSpec spec{2, 1, 2, {2, 0}};
  const ParamVector pv = ParamVector::zeros(spec);
  const auto blocks = pv.block_layout();
  REQUIRE(blocks.size() == 4);
  CHECK(blocks[0].name == "a");
  CHECK(blocks[1].name == "b");
  CHECK(blocks[2].name == "c1");
  CHECK(blocks[3].name == "c2");
  int at = 0;
  for (const auto& b : blocks) {
    CHECK(b.offset == at);
    at += b.size;
  }
  CHECK(at == spec.param_count());
}
