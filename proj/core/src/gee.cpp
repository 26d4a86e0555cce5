#include "mbl/gee.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "mbl/errors.hpp"
#include "mbl/numeric.hpp"

namespace mbl {

BlockingScheme BlockingScheme::single(int p) {
  BlockingScheme s;
  s.blocks.emplace_back(p);
  std::iota(s.blocks.back().begin(), s.blocks.back().end(), 0);
  return s;
}

void BlockingScheme::validate(int p) const {
  if (blocks.empty()) throw std::invalid_argument("BlockingScheme: no blocks");
  std::vector<char> seen(static_cast<std::size_t>(p), 0);
  for (const auto& block : blocks) {
    if (block.empty()) throw std::invalid_argument("BlockingScheme: empty block");
    for (int i : block) {
      if (i < 0 || i >= p) throw std::invalid_argument("BlockingScheme: index out of range");
      if (seen[static_cast<std::size_t>(i)]++)
        throw std::invalid_argument("BlockingScheme: blocks must be disjoint");
    }
  }
  for (char s : seen)
    if (!s) throw std::invalid_argument("BlockingScheme: blocks must cover all coefficients");
}

BlockingScheme grouped_blocks(const ModelSpec& spec) {
  BlockingScheme s;
  const int nab = (spec.order_a + 1) + (spec.order_b + 1);
  std::vector<int> ab(static_cast<std::size_t>(nab));
  std::iota(ab.begin(), ab.end(), 0);
  s.blocks.push_back(std::move(ab));
  int at = nab;
  for (int m : spec.order_link) {
    std::vector<int> ck(static_cast<std::size_t>(m + 1));
    std::iota(ck.begin(), ck.end(), at);
    at += m + 1;
    s.blocks.push_back(std::move(ck));
  }
  return s;
}

BlockingScheme shared_beta_mean_curvature_blocks(int n_responses) {
  BlockingScheme s;
  std::vector<int> mean(static_cast<std::size_t>(2 * n_responses));
  std::iota(mean.begin(), mean.end(), 0);
  s.blocks.push_back(std::move(mean));
  s.blocks.push_back({2 * n_responses});
  return s;
}

BlockingScheme shared_beta_per_response_blocks(int n_responses) {
  BlockingScheme s;
  for (int k = 0; k < n_responses; ++k) s.blocks.push_back({2 * k, 2 * k + 1});
  s.blocks.push_back({2 * n_responses});
  return s;
}

namespace {

constexpr double kTiny = 1e-300;

// Per-subject contributions are independent; chunks of fixed size are
// processed by up to `threads` workers and reduced in chunk order, so the
// result does not depend on the thread count.
constexpr long kChunkSubjects = 64;

int thread_budget(const FitOptions& opts, long n_subjects) {
  int cap = opts.max_threads;
  if (cap <= 0) {
    cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap <= 0) cap = 1;
  }
  if (const char* env = std::getenv("LATENT_MBL_THREADS")) {
    const int env_cap = std::atoi(env);
    if (env_cap > 0) cap = std::min(cap, env_cap);
  }
  const long chunks = (n_subjects + kChunkSubjects - 1) / kChunkSubjects;
  return static_cast<int>(std::max<long>(1, std::min<long>(cap, chunks)));
}

// Applies V^{-1} = A^{-1/2} R^{-1} A^{-1/2} without forming V. The
// unstructured R is factored once per resolve; alpha is assumed already
// projected into the PD range.
class VinvOps {
 public:
  VinvOps(const WorkingCorrelation& corr, int k) : structure_(corr.structure), k_(k) {
    if (structure_ == CorrStructure::kExchangeable) {
      alpha_ = project_alpha(corr.alpha, k);
    } else if (structure_ == CorrStructure::kUnstructured) {
      Eigen::MatrixXd r = corr.alpha_matrix.size() == 0
                              ? Eigen::MatrixXd::Identity(k, k)
                              : project_correlation_matrix(corr.alpha_matrix);
      r_solver_.compute(r);
      if (r_solver_.info() != Eigen::Success) {
        // degenerate R: ridge-repair, never fatal
        r.diagonal().array() += 1e-8;
        r_solver_.compute(r);
      }
    }
  }

  // X is K x m; returns V^{-1} X given the diagonal w = pi (1 - pi).
  Eigen::MatrixXd apply(const Eigen::VectorXd& w, const Eigen::MatrixXd& x) const {
    switch (structure_) {
      case CorrStructure::kIndependence:
        return x.array().colwise() / w.array();
      case CorrStructure::kExchangeable: {
        const Eigen::VectorXd inv_sd = w.cwiseSqrt().cwiseInverse();
        Eigen::MatrixXd y = x.array().colwise() * inv_sd.array();
        const double scale = alpha_ / (1.0 + (k_ - 1) * alpha_);
        y = (y - scale * (Eigen::VectorXd::Ones(k_) * y.colwise().sum())) / (1.0 - alpha_);
        return y.array().colwise() * inv_sd.array();
      }
      case CorrStructure::kUnstructured: {
        const Eigen::VectorXd inv_sd = w.cwiseSqrt().cwiseInverse();
        Eigen::MatrixXd y = x.array().colwise() * inv_sd.array();
        y = r_solver_.solve(y);
        return y.array().colwise() * inv_sd.array();
      }
    }
    throw std::logic_error("VinvOps: bad structure");
  }

 private:
  CorrStructure structure_;
  int k_;
  double alpha_ = 0.0;
  Eigen::LDLT<Eigen::MatrixXd> r_solver_;
};

struct Accumulated {
  Eigen::MatrixXd m;  // sum D' V^{-1} D over the requested columns
  Eigen::VectorXd u;  // sum D' V^{-1} (y - pi)
};

template <typename PerSubject, typename Partial>
void for_each_subject_chunked(const MblDataset& data, int threads, Partial make_partial,
                              PerSubject per_subject, std::vector<Partial>& partials) {
  const long n = data.n_subjects();
  const long n_chunks = (n + kChunkSubjects - 1) / kChunkSubjects;
  partials.assign(static_cast<std::size_t>(n_chunks), make_partial);
  auto run_chunk = [&](long c) {
    const long lo = c * kChunkSubjects;
    const long hi = std::min(n, lo + kChunkSubjects);
    for (long i = lo; i < hi; ++i)
      per_subject(data.subjects()[static_cast<std::size_t>(i)], partials[static_cast<std::size_t>(c)]);
  };
  if (threads <= 1 || n_chunks <= 1) {
    for (long c = 0; c < n_chunks; ++c) run_chunk(c);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> workers;
  const int n_workers = static_cast<int>(std::min<long>(threads, n_chunks));
  workers.reserve(static_cast<std::size_t>(n_workers));
  for (int w = 0; w < n_workers; ++w)
    workers.emplace_back([&]() {
      for (long c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) run_chunk(c);
    });
  for (auto& w : workers) w.join();
}

Accumulated accumulate(const MblDataset& data, const MeanModel& model,
                       const WorkingCorrelation& corr, const Eigen::VectorXd& theta,
                       const std::vector<int>* columns, bool want_m, int threads) {
  const int k = model.response_count();
  const int p = model.param_count();
  const int m = columns ? static_cast<int>(columns->size()) : p;
  const VinvOps vinv(corr, k);

  struct Partial {
    Eigen::MatrixXd m;
    Eigen::VectorXd u;
  };
  Partial zero;
  zero.m = Eigen::MatrixXd::Zero(want_m ? m : 0, want_m ? m : 0);
  zero.u = Eigen::VectorXd::Zero(m);

  auto per_subject = [&](const Subject& s, Partial& acc) {
    // workspace local to the worker: chunks run concurrently
    thread_local Eigen::VectorXd pi;
    thread_local Eigen::MatrixXd jac, d_cols;
    pi.resize(k);
    jac.resize(k, p);
    d_cols.resize(k, m);
    for (std::size_t j = 0; j < s.times.size(); ++j) {
      model.evaluate(s.times[j], s.duration, theta, pi, &jac);
      if (columns) {
        for (int c = 0; c < m; ++c) d_cols.col(c) = jac.col((*columns)[static_cast<std::size_t>(c)]);
      } else {
        d_cols = jac;
      }
      const Eigen::VectorXd w = pi.array() * (1.0 - pi.array());
      const Eigen::MatrixXd vinv_d = vinv.apply(w, d_cols);
      const Eigen::VectorXd res = s.outcomes.row(static_cast<Eigen::Index>(j)).transpose() - pi;
      if (want_m) acc.m.noalias() += d_cols.transpose() * vinv_d;
      acc.u.noalias() += vinv_d.transpose() * res;
    }
  };

  std::vector<Partial> partials;
  for_each_subject_chunked(data, threads, zero, per_subject, partials);
  Accumulated total;
  total.m = zero.m;
  total.u = zero.u;
  for (const auto& part : partials) {
    if (want_m) total.m += part.m;
    total.u += part.u;
  }
  return total;
}

// Symmetric solve with one ridge retry; persistent failure names the block.
Eigen::VectorXd solve_normal(Eigen::MatrixXd m, const Eigen::VectorXd& u,
                             const std::string& block_name) {
  const int p = static_cast<int>(m.rows());
  m = 0.5 * (m + m.transpose()).eval();
  auto attempt = [&](const Eigen::MatrixXd& mat) -> std::optional<Eigen::VectorXd> {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(mat);
    if (ldlt.info() != Eigen::Success) return std::nullopt;
    Eigen::VectorXd x = ldlt.solve(u);
    if (!x.allFinite()) return std::nullopt;
    const double resid = (mat * x - u).norm();
    if (resid > 1e-6 * (mat.norm() * x.norm() + u.norm() + 1.0)) return std::nullopt;
    return x;
  };
  if (auto x = attempt(m)) return *x;
  const double tr = m.trace();
  if (!std::isfinite(tr))
    throw SingularSystemError("normal matrix is not finite", block_name);
  Eigen::MatrixXd ridged = m;
  ridged.diagonal().array() += 1e-8 * std::abs(tr) / std::max(1, p) + 1e-12;
  if (auto x = attempt(ridged)) return *x;
  throw SingularSystemError("normal matrix solve failed after ridge repair", block_name);
}

}  // namespace

double estimate_alpha(const MblDataset& data, const MeanModel& model, const Eigen::VectorXd& theta,
                      int p_mean) {
  const int k = model.response_count();
  const long n_obs = data.total_observations();
  const double n_star = static_cast<double>(n_obs) * k * (k - 1) / 2.0;
  if (n_star <= p_mean)
    throw ConfigError("estimate_alpha: too few observations (N* <= p)");
  double total = 0.0;
  Eigen::VectorXd pi(k);
  for (const auto& s : data.subjects()) {
    for (std::size_t j = 0; j < s.times.size(); ++j) {
      model.evaluate(s.times[j], s.duration, theta, pi, nullptr);
      const Eigen::VectorXd sd = (pi.array() * (1.0 - pi.array())).sqrt();
      const Eigen::VectorXd r =
          (s.outcomes.row(static_cast<Eigen::Index>(j)).transpose() - pi).cwiseQuotient(sd);
      const double sum = r.sum();
      total += 0.5 * (sum * sum - r.squaredNorm());
    }
  }
  return total / (n_star - p_mean);
}

Eigen::MatrixXd estimate_unstructured_correlation(const MblDataset& data, const MeanModel& model,
                                                  const Eigen::VectorXd& theta, int p_mean) {
  const int k = model.response_count();
  const long n_obs = data.total_observations();
  if (n_obs <= p_mean)
    throw ConfigError("estimate_unstructured_correlation: too few observations");
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd pi(k);
  for (const auto& s : data.subjects()) {
    for (std::size_t j = 0; j < s.times.size(); ++j) {
      model.evaluate(s.times[j], s.duration, theta, pi, nullptr);
      const Eigen::VectorXd sd = (pi.array() * (1.0 - pi.array())).sqrt();
      const Eigen::VectorXd r =
          (s.outcomes.row(static_cast<Eigen::Index>(j)).transpose() - pi).cwiseQuotient(sd);
      acc.noalias() += r * r.transpose();
    }
  }
  acc /= static_cast<double>(n_obs - p_mean);
  acc.diagonal().setOnes();
  return project_correlation_matrix(acc);
}

WorkingCorrelation resolve_correlation(const MblDataset& data, const MeanModel& model,
                                       CorrStructure structure, const Eigen::VectorXd& theta) {
  switch (structure) {
    case CorrStructure::kIndependence:
      return WorkingCorrelation::independence();
    case CorrStructure::kExchangeable: {
      const double raw = estimate_alpha(data, model, theta, model.param_count());
      return WorkingCorrelation::exchangeable(project_alpha(raw, model.response_count()));
    }
    case CorrStructure::kUnstructured:
      return WorkingCorrelation::unstructured(
          estimate_unstructured_correlation(data, model, theta, model.param_count()));
  }
  throw std::logic_error("resolve_correlation: bad structure");
}

Eigen::VectorXd estimating_function(const MblDataset& data, const MeanModel& model,
                                    const WorkingCorrelation& corr, const Eigen::VectorXd& theta) {
  return accumulate(data, model, corr, theta, nullptr, false, 1).u;
}

Eigen::VectorXd gee_step_full(const MblDataset& data, const MeanModel& model,
                              CorrStructure structure, const Eigen::VectorXd& theta,
                              const FitOptions& opts) {
  const WorkingCorrelation corr = resolve_correlation(data, model, structure, theta);
  const int threads = thread_budget(opts, data.n_subjects());
  const Accumulated acc = accumulate(data, model, corr, theta, nullptr, true, threads);
  return theta + solve_normal(acc.m, acc.u, "all");
}

Eigen::VectorXd gee_step_blocked(const MblDataset& data, const MeanModel& model,
                                 CorrStructure structure, const Eigen::VectorXd& theta,
                                 const BlockingScheme& scheme, const FitOptions& opts) {
  scheme.validate(model.param_count());
  const int threads = thread_budget(opts, data.n_subjects());
  Eigen::VectorXd cur = theta;
  for (std::size_t l = 0; l < scheme.blocks.size(); ++l) {
    const auto& block = scheme.blocks[l];
    const WorkingCorrelation corr = resolve_correlation(data, model, structure, cur);
    const Accumulated acc = accumulate(data, model, corr, cur, &block, true, threads);
    const Eigen::VectorXd delta = solve_normal(acc.m, acc.u, std::to_string(l + 1));
    for (std::size_t c = 0; c < block.size(); ++c)
      cur[block[c]] += delta[static_cast<Eigen::Index>(c)];
  }
  return cur;
}

namespace {

double estimating_norm(const MblDataset& data, const MeanModel& model, CorrStructure structure,
                       const Eigen::VectorXd& theta) {
  const WorkingCorrelation corr = resolve_correlation(data, model, structure, theta);
  return estimating_function(data, model, corr, theta).norm();
}

}  // namespace

FitResult fit(const MblDataset& data, const MeanModel& model, const BlockingScheme& scheme,
              CorrStructure structure, const Eigen::VectorXd& init, const FitOptions& opts) {
  if (init.size() != model.param_count())
    throw std::invalid_argument("fit: init length does not match the model");
  scheme.validate(model.param_count());

  FitResult result;
  result.p = model.param_count();
  Eigen::VectorXd theta = init;
  double g_norm = estimating_norm(data, model, structure, theta);
  double prev_rel = std::numeric_limits<double>::infinity();
  int growth_streak = 0;
  // scale floor so the safeguard and divergence checks ignore noise at the
  // numerical fixed point
  const double g_floor = 1e-8 * static_cast<double>(data.total_observations());

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    const Eigen::VectorXd proposed = gee_step_blocked(data, model, structure, theta, scheme, opts);
    Eigen::VectorXd delta = proposed - theta;

    // Step safeguarding: halve the increment while it lands somewhere
    // non-finite or blows the estimating-function norm up by 10x.
    Eigen::VectorXd cand;
    double cand_norm = 0.0;
    bool accepted = false;
    for (int halving = 0; halving <= 10; ++halving) {
      cand = theta + delta;
      if (cand.allFinite()) {
        cand_norm = estimating_norm(data, model, structure, cand);
        if (std::isfinite(cand_norm) && cand_norm <= 10.0 * g_norm + g_floor) {
          accepted = true;
          break;
        }
      }
      delta *= 0.5;
    }
    if (!accepted)
      throw DivergenceError("fit: step rejected after 10 halvings", result.trace);

    const double rel = (cand - theta).norm() / std::max(cand.norm(), kTiny);
    result.trace.push_back(rel);
    result.iterations = iter;
    theta = cand;
    g_norm = cand_norm;

    if (rel <= opts.tol) {
      result.converged = true;
      break;
    }
    if (rel > prev_rel && rel > 1e-12) {
      if (++growth_streak >= 5)
        throw DivergenceError("fit: relative difference grew for 5 consecutive iterations",
                              result.trace);
    } else {
      growth_streak = 0;
    }
    prev_rel = rel;
  }

  result.coefficients = theta;
  result.corr = resolve_correlation(data, model, structure, theta);
  result.robust_cov = robust_variance(data, model, structure, theta, opts);
  return result;
}

Eigen::MatrixXd robust_variance(const MblDataset& data, const MeanModel& model,
                                CorrStructure structure, const Eigen::VectorXd& theta,
                                const FitOptions& opts) {
  const int k = model.response_count();
  const int p = model.param_count();
  const WorkingCorrelation corr = resolve_correlation(data, model, structure, theta);
  const int threads = thread_budget(opts, data.n_subjects());
  Accumulated acc = accumulate(data, model, corr, theta, nullptr, true, threads);

  acc.m = 0.5 * (acc.m + acc.m.transpose()).eval();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(acc.m);
  if (ldlt.info() != Eigen::Success || !ldlt.solve(Eigen::VectorXd::Ones(p)).allFinite()) {
    std::cerr << "robust_variance: singular information matrix, applying ridge repair\n";
    acc.m.diagonal().array() += 1e-8 * std::abs(acc.m.trace()) / std::max(1, p) + 1e-12;
    ldlt.compute(acc.m);
  }

  // M^{-1} B M^{-1} assembled as a sum of outer products g g' with
  // g = M^{-1} D' V^{-1} r, so the result is symmetric PSD by construction.
  const VinvOps vinv(corr, k);
  struct Partial {
    Eigen::MatrixXd s;
  };
  Partial zero;
  zero.s = Eigen::MatrixXd::Zero(p, p);
  auto per_subject = [&](const Subject& s, Partial& acc_p) {
    thread_local Eigen::VectorXd pi;
    thread_local Eigen::MatrixXd jac;
    pi.resize(k);
    jac.resize(k, p);
    for (std::size_t j = 0; j < s.times.size(); ++j) {
      model.evaluate(s.times[j], s.duration, theta, pi, &jac);
      const Eigen::VectorXd w = pi.array() * (1.0 - pi.array());
      const Eigen::VectorXd res = s.outcomes.row(static_cast<Eigen::Index>(j)).transpose() - pi;
      const Eigen::VectorXd h = jac.transpose() * vinv.apply(w, res);
      const Eigen::VectorXd g = ldlt.solve(h);
      acc_p.s.noalias() += g * g.transpose();
    }
  };
  std::vector<Partial> partials;
  for_each_subject_chunked(data, threads, zero, per_subject, partials);
  Eigen::MatrixXd sandwich = Eigen::MatrixXd::Zero(p, p);
  for (const auto& part : partials) sandwich += part.s;
  return 0.5 * (sandwich + sandwich.transpose());
}

namespace {

// Newton-solved logistic regression used by the initialization recipes.
Eigen::VectorXd newton_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int max_iter,
                                double tol) {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(x.cols());
  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd eta = x * beta;
    Eigen::VectorXd pi(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) pi[i] = expit(eta[i]);
    const Eigen::VectorXd w = pi.array() * (1.0 - pi.array());
    const Eigen::MatrixXd info = x.transpose() * w.asDiagonal() * x;
    const Eigen::VectorXd score = x.transpose() * (y - pi);
    const Eigen::VectorXd delta = solve_normal(info, score, "init");
    beta += delta;
    if (delta.norm() <= tol * std::max(1.0, beta.norm())) break;
  }
  return beta;
}

}  // namespace

ParamVector init_params(const MblDataset& data, const ModelSpec& spec, double bandwidth,
                        std::vector<double> grid) {
  spec.validate();
  if (spec.n_responses != data.n_responses())
    throw std::invalid_argument("init_params: spec/data response count mismatch");
  for (int m : spec.order_link)
    if (m < 1) throw std::invalid_argument("init_params: every link order must be >= 1");
  if (grid.empty()) {
    grid.reserve(49);
    for (int j = 1; j <= 49; ++j) grid.push_back(2.0 * j / 100.0);
  }

  ParamVector init = ParamVector::zeros(spec);
  init.a_coeffs[0] = std::log(1.5);
  init.b_coeffs[0] = std::log(3.0);
  const MaCurveParams ab0{init.a_coeffs[0], init.b_coeffs[0]};

  const int K = spec.n_responses;
  std::vector<double> xs;                      // curve value at surviving grid points
  Eigen::MatrixXd freq(0, K);                  // empirical frequencies
  std::vector<Eigen::VectorXd> freq_rows;
  for (double tj : grid) {
    long count = 0;
    Eigen::VectorXd events = Eigen::VectorXd::Zero(K);
    for (const auto& s : data.subjects())
      for (std::size_t j = 0; j < s.times.size(); ++j)
        if (std::abs(s.times[j] - tj) <= bandwidth) {
          ++count;
          events += s.outcomes.row(static_cast<Eigen::Index>(j)).transpose();
        }
    if (count == 0) continue;  // empty window: drop the grid point
    xs.push_back(eval_ma(tj, ab0));
    freq_rows.push_back(events / static_cast<double>(count));
  }
  if (xs.size() < 2)
    throw InitializationError("init_params: fewer than 2 grid points have observations");

  const auto n = static_cast<Eigen::Index>(xs.size());
  const Eigen::Map<const Eigen::VectorXd> x(xs.data(), n);
  const double x_mean = x.mean();
  const double sxx = (x.array() - x_mean).square().sum();
  if (sxx <= 0.0) throw InitializationError("init_params: degenerate curve values on the grid");
  for (int k = 0; k < K; ++k) {
    Eigen::VectorXd yk(n);
    for (Eigen::Index i = 0; i < n; ++i) yk[i] = freq_rows[static_cast<std::size_t>(i)][k];
    const double y_mean = yk.mean();
    const double slope = ((x.array() - x_mean) * (yk.array() - y_mean)).sum() / sxx;
    init.link_coeffs[static_cast<std::size_t>(k)][0] = y_mean - slope * x_mean;
    init.link_coeffs[static_cast<std::size_t>(k)][1] = slope;
  }
  return init;
}

Eigen::VectorXd init_shared_beta(const MblDataset& data) {
  const int K = data.n_responses();
  const long n = data.total_observations();
  Eigen::MatrixXd x(n, 3);
  Eigen::MatrixXd ys(n, K);
  long row = 0;
  for (const auto& s : data.subjects())
    for (std::size_t j = 0; j < s.times.size(); ++j, ++row) {
      const double t = s.times[j];
      x(row, 0) = 1.0;
      x(row, 1) = t;
      x(row, 2) = t * t;
      ys.row(row) = s.outcomes.row(static_cast<Eigen::Index>(j));
    }

  Eigen::VectorXd theta(2 * K + 1);
  double beta_sum = 0.0;
  int beta_n = 0;
  for (int k = 0; k < K; ++k) {
    const Eigen::VectorXd gamma = newton_logistic(x, ys.col(k), 50, 1e-12);
    theta[2 * k] = gamma[0];
    theta[2 * k + 1] = gamma[1];
    if (std::abs(gamma[1]) > 1e-8) {
      beta_sum += gamma[2] / gamma[1];
      ++beta_n;
    }
  }
  if (beta_n == 0)
    throw InitializationError("init_shared_beta: all linear coefficients vanish");
  theta[2 * K] = beta_sum / beta_n;
  return theta;
}

FitResult fit_latent(const MblDataset& data, const ModelSpec& spec, const BlockingScheme& scheme,
                     CorrStructure structure, const ParamVector& init, const FitOptions& opts) {
  const LatentBetaModel model(spec);
  return fit(data, model, scheme, structure, init.flatten(), opts);
}

}  // namespace mbl
