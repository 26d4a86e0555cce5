#ifndef MBL_GOF_HPP
#define MBL_GOF_HPP

#include <optional>
#include <string>
#include <vector>

#include "mbl/dataset.hpp"
#include "mbl/mean_model.hpp"

namespace mbl {

enum class HlBinning { kFixedWidth, kDecile };

struct HlBin {
  double lo = 0.0;
  double hi = 0.0;
  double observed = 0.0;  // sum of outcomes in the bin
  double expected = 0.0;  // sum of fitted probabilities
  long cells = 0;
};

struct HlResponse {
  double x2 = 0.0;
  std::vector<HlBin> bins;  // nonempty bins only
  bool degenerate = false;  // fewer than 2 nonempty bins
};

/// Per-response and aggregate Pearson statistics with the chi-square
/// reference points used for the tests.
struct HlReport {
  static constexpr double kChi2_8_95 = 15.51;        // chi^2(8), 95th percentile
  static constexpr double kChi2_64_95 = 83.68;       // chi^2(64)
  static constexpr double kScaled8Chi2_8_95 = 124.06;  // 8 * chi^2(8)

  std::vector<HlResponse> per_response;
  double total = 0.0;

  bool all_responses_pass() const;      // every X_k^2 < 15.51
  bool aggregate_pass() const;          // X^2 below the smaller reference point
};

/// Pearson chi-square over fixed-width probability bins (0.1(l-1), 0.1l],
/// with the first bin closed at 0; empty bins are dropped from the sum.
/// The decile mode bins by sample deciles of the fitted probabilities
/// instead.
HlReport hosmer_lemeshow(const MblDataset& data, const MeanModel& model,
                         const Eigen::VectorXd& theta, HlBinning binning = HlBinning::kFixedWidth);

/// Predicted-vs-empirical series for one response at a given duration.
/// Empirical entries are missing (not zero) where the window holds no
/// observations.
struct CheckCurve {
  int response = 0;  // 0-based
  double duration = 0.0;
  std::vector<double> t;
  std::vector<double> predicted;
  std::vector<std::optional<double>> empirical;
  std::vector<long> n_window;
};

/// Grid t_j = 0.05 j, j = 1..19; empirical values are sample proportions
/// among observations with |time - t_j| <= t_halfwidth and duration within
/// d +/- d_halfwidth.
std::vector<CheckCurve> check_curves(const MblDataset& data, const MeanModel& model,
                                     const Eigen::VectorXd& theta, double duration,
                                     double d_halfwidth, double t_halfwidth = 0.05);

std::string hl_report_text(const HlReport& report);
std::string hl_report_json(const HlReport& report);
std::string check_curve_csv(const CheckCurve& curve);
/// Static small-multiples SVG, one panel per response.
std::string check_curves_svg(const std::vector<CheckCurve>& curves);

}  // namespace mbl

#endif
