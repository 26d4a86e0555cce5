#ifndef MBL_REPORT_HPP
#define MBL_REPORT_HPP

#include <memory>
#include <string>

#include "mbl/gee.hpp"

namespace mbl {

/// A fitted model bundled with its estimation summary; round-trips through
/// JSON so downstream commands (gof, check-plot) can consume fit outputs.
struct FitReport {
  enum class Family { kLatent, kSharedBeta };
  Family family = Family::kLatent;
  ModelSpec spec;        // latent family
  int n_responses = 0;   // shared-curvature family
  FitResult fit;

  std::unique_ptr<MeanModel> make_model() const;
};

/// JSON with coefficients and standard errors grouped by block, the alpha
/// estimate, iteration trace, convergence flag and QIC_u (null until model
/// selection fills it).
std::string fit_report_json(const FitReport& report);
FitReport fit_report_from_json(const std::string& text);
FitReport load_fit_report(const std::string& path);

/// Plain-text table with one row per coefficient block and
/// constant/linear/quadratic/... columns, standard errors in parentheses.
std::string fit_report_text(const FitReport& report);

}  // namespace mbl

#endif
