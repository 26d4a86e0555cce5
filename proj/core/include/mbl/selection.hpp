#ifndef MBL_SELECTION_HPP
#define MBL_SELECTION_HPP

#include <string>
#include <vector>

#include "mbl/gee.hpp"

namespace mbl {

/// QIC_u = -2 Q + 2 p with Q the Bernoulli quasi-likelihood under the
/// independence working model, every (subject, time, response) cell one
/// Bernoulli term, and p the mean-parameter count.
double qic_u(const MblDataset& data, const MeanModel& model, const Eigen::VectorXd& theta);

struct SelectionStep {
  std::string label;
  ModelSpec spec;
  double qic = 0.0;
  bool accepted = false;
};

struct SelectionConfig {
  CorrStructure structure = CorrStructure::kIndependence;
  FitOptions fit_options;
  bool grouped_blocking = true;  // per-candidate grouped scheme, else single block
};

struct SelectionTrace {
  std::vector<SelectionStep> steps;  // every candidate fitted, in evaluation order
  ModelSpec final_spec;
  FitResult final_fit;
};

/// Label relative to the search root: orders below the root grouped by
/// value, e.g. "m4=m6=ma=1" or "m4=m6=1,ma=0"; the root itself is "Full".
std::string model_label(const ModelSpec& spec, const ModelSpec& root);

/// Greedy backward order reduction from full_spec: each round fits every
/// one-order-lower neighbor (warm-started from the incumbent) and accepts
/// the smallest QIC_u candidate while it does not exceed the incumbent's.
/// Diverging candidates enter the trace with QIC_u = +inf. Ties prefer the
/// highest-index link block, then b, then a.
SelectionTrace backward_select(const MblDataset& data, const ModelSpec& full_spec,
                               const SelectionConfig& config = {});

/// CSV with columns label,qic_u,accepted.
std::string selection_trace_csv(const SelectionTrace& trace);

}  // namespace mbl

#endif
