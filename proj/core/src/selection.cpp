#include "mbl/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "mbl/errors.hpp"
#include "mbl/numeric.hpp"

namespace mbl {

double qic_u(const MblDataset& data, const MeanModel& model, const Eigen::VectorXd& theta) {
  const int k = model.response_count();
  double q = 0.0;
  Eigen::VectorXd pi(k);
  for (const auto& s : data.subjects())
    for (std::size_t j = 0; j < s.times.size(); ++j) {
      model.evaluate(s.times[j], s.duration, theta, pi, nullptr);
      for (int r = 0; r < k; ++r) {
        const double y = s.outcomes(static_cast<Eigen::Index>(j), r);
        q += y * std::log(pi[r]) + (1.0 - y) * std::log(1.0 - pi[r]);
      }
    }
  return -2.0 * q + 2.0 * model.param_count();
}

namespace {

// Reduction targets in tie-break preference order: c_K .. c_1, b, a.
struct OrderRef {
  enum Kind { kLink, kB, kA } kind;
  int response;  // 0-based, for kLink
};

std::vector<OrderRef> reduction_preference(const ModelSpec& spec) {
  std::vector<OrderRef> order;
  for (int k = spec.n_responses - 1; k >= 0; --k) order.push_back({OrderRef::kLink, k});
  order.push_back({OrderRef::kB, -1});
  order.push_back({OrderRef::kA, -1});
  return order;
}

int& order_of(ModelSpec& spec, const OrderRef& ref) {
  switch (ref.kind) {
    case OrderRef::kLink:
      return spec.order_link[static_cast<std::size_t>(ref.response)];
    case OrderRef::kB:
      return spec.order_b;
    case OrderRef::kA:
      return spec.order_a;
  }
  throw std::logic_error("order_of");
}

// Drops the highest-order coefficient of the reduced block.
ParamVector truncate_to(const ParamVector& params, const ModelSpec& target) {
  ParamVector out = params;
  out.a_coeffs = params.a_coeffs.head(target.order_a + 1);
  out.b_coeffs = params.b_coeffs.head(target.order_b + 1);
  for (std::size_t k = 0; k < out.link_coeffs.size(); ++k)
    out.link_coeffs[k] =
        params.link_coeffs[k].head(target.order_link[k] + 1).eval();
  return out;
}

FitResult fit_spec(const MblDataset& data, const ModelSpec& spec, const ParamVector& init,
                   const SelectionConfig& config) {
  const LatentBetaModel model(spec);
  const BlockingScheme scheme =
      config.grouped_blocking ? grouped_blocks(spec) : BlockingScheme::single(spec.param_count());
  return fit(data, model, scheme, config.structure, init.flatten(), config.fit_options);
}

}  // namespace

std::string model_label(const ModelSpec& spec, const ModelSpec& root) {
  // canonical name order: m1..mK, ma, mb
  std::vector<std::pair<std::string, int>> lowered;
  for (int k = 0; k < spec.n_responses; ++k) {
    const int v = spec.order_link[static_cast<std::size_t>(k)];
    if (v < root.order_link[static_cast<std::size_t>(k)])
      lowered.emplace_back("m" + std::to_string(k + 1), v);
  }
  if (spec.order_a < root.order_a) lowered.emplace_back("ma", spec.order_a);
  if (spec.order_b < root.order_b) lowered.emplace_back("mb", spec.order_b);
  if (lowered.empty()) return "Full";

  std::string label;
  std::vector<bool> used(lowered.size(), false);
  for (std::size_t i = 0; i < lowered.size(); ++i) {
    if (used[i]) continue;
    if (!label.empty()) label += ',';
    label += lowered[i].first;
    for (std::size_t j = i + 1; j < lowered.size(); ++j)
      if (!used[j] && lowered[j].second == lowered[i].second) {
        used[j] = true;
        label += '=' + lowered[j].first;
      }
    label += '=' + std::to_string(lowered[i].second);
  }
  return label;
}

SelectionTrace backward_select(const MblDataset& data, const ModelSpec& full_spec,
                               const SelectionConfig& config) {
  full_spec.validate();
  SelectionTrace trace;

  ModelSpec incumbent_spec = full_spec;
  FitResult incumbent_fit =
      fit_spec(data, full_spec, init_params(data, full_spec), config);
  double incumbent_qic =
      qic_u(data, LatentBetaModel(incumbent_spec), incumbent_fit.coefficients);
  incumbent_fit.qic_u = incumbent_qic;
  trace.steps.push_back({model_label(incumbent_spec, full_spec), incumbent_spec, incumbent_qic, true});

  while (true) {
    ParamVector incumbent_params =
        LatentBetaModel(incumbent_spec).unflatten(incumbent_fit.coefficients);

    struct Candidate {
      ModelSpec spec;
      double qic;
      FitResult fit;
      std::size_t step_index;
    };
    std::optional<Candidate> best;

    for (const OrderRef& ref : reduction_preference(incumbent_spec)) {
      ModelSpec cand_spec = incumbent_spec;
      int& order = order_of(cand_spec, ref);
      if (order == 0) continue;
      --order;

      double cand_qic = std::numeric_limits<double>::infinity();
      FitResult cand_fit;
      try {
        cand_fit = fit_spec(data, cand_spec, truncate_to(incumbent_params, cand_spec), config);
        cand_qic = qic_u(data, LatentBetaModel(cand_spec), cand_fit.coefficients);
        cand_fit.qic_u = cand_qic;
      } catch (const DivergenceError&) {
        // recorded with infinite QIC_u and skipped
      }
      trace.steps.push_back({model_label(cand_spec, full_spec), cand_spec, cand_qic, false});
      if (std::isfinite(cand_qic) && (!best || cand_qic < best->qic))
        best = Candidate{cand_spec, cand_qic, std::move(cand_fit), trace.steps.size() - 1};
    }

    if (!best || best->qic > incumbent_qic) break;
    trace.steps[best->step_index].accepted = true;
    incumbent_spec = best->spec;
    incumbent_fit = std::move(best->fit);
    incumbent_qic = best->qic;
  }

  trace.final_spec = incumbent_spec;
  trace.final_fit = std::move(incumbent_fit);
  return trace;
}

std::string selection_trace_csv(const SelectionTrace& trace) {
  std::string out = "label,qic_u,accepted\n";
  char buf[64];
  for (const auto& step : trace.steps) {
    if (std::isfinite(step.qic)) {
      std::snprintf(buf, sizeof(buf), "%.10g", step.qic);
    } else {
      std::snprintf(buf, sizeof(buf), "inf");
    }
    out += step.label + "," + buf + "," + (step.accepted ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace mbl
