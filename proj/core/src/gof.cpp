#include "mbl/gof.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace mbl {

using nlohmann::json;

bool HlReport::all_responses_pass() const {
  for (const auto& r : per_response)
    if (!(r.x2 < kChi2_8_95)) return false;
  return true;
}

bool HlReport::aggregate_pass() const { return total < std::min(kChi2_64_95, kScaled8Chi2_8_95); }

namespace {

// bin index 1..10 for fixed-width bins (0.1(l-1), 0.1l], first bin closed at 0
int fixed_bin(double p) {
  const int l = static_cast<int>(std::ceil(p * 10.0));
  return std::clamp(l, 1, 10);
}

HlResponse finish_response(std::vector<HlBin> raw) {
  HlResponse out;
  for (auto& bin : raw)
    if (bin.cells > 0) out.bins.push_back(bin);
  if (out.bins.size() < 2) {
    out.degenerate = true;
    out.x2 = 0.0;
    return out;
  }
  for (const auto& bin : out.bins) {
    const double diff = bin.observed - bin.expected;
    out.x2 += diff * diff / bin.expected;
  }
  return out;
}

}  // namespace

HlReport hosmer_lemeshow(const MblDataset& data, const MeanModel& model,
                         const Eigen::VectorXd& theta, HlBinning binning) {
  const int k = model.response_count();
  HlReport report;
  report.per_response.resize(static_cast<std::size_t>(k));

  // fitted probability and outcome per cell, per response
  std::vector<std::vector<std::pair<double, double>>> cells(static_cast<std::size_t>(k));
  Eigen::VectorXd pi(k);
  for (const auto& s : data.subjects())
    for (std::size_t j = 0; j < s.times.size(); ++j) {
      model.evaluate(s.times[j], s.duration, theta, pi, nullptr);
      for (int r = 0; r < k; ++r)
        cells[static_cast<std::size_t>(r)].emplace_back(pi[r],
                                                        s.outcomes(static_cast<Eigen::Index>(j), r));
    }

  for (int r = 0; r < k; ++r) {
    auto& cell = cells[static_cast<std::size_t>(r)];
    std::vector<HlBin> raw(10);
    if (binning == HlBinning::kFixedWidth) {
      for (int l = 0; l < 10; ++l) {
        raw[static_cast<std::size_t>(l)].lo = l / 10.0;
        raw[static_cast<std::size_t>(l)].hi = (l + 1) / 10.0;
      }
      for (const auto& [p, y] : cell) {
        HlBin& bin = raw[static_cast<std::size_t>(fixed_bin(p) - 1)];
        bin.observed += y;
        bin.expected += p;
        ++bin.cells;
      }
    } else {
      // decile-of-risk grouping: near-equal rank groups of the sorted cells
      std::sort(cell.begin(), cell.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      const long n = static_cast<long>(cell.size());
      for (int l = 0; l < 10; ++l) {
        const long lo = l * n / 10;
        const long hi = (l + 1) * n / 10;
        HlBin& bin = raw[static_cast<std::size_t>(l)];
        for (long i = lo; i < hi; ++i) {
          const auto& [p, y] = cell[static_cast<std::size_t>(i)];
          if (bin.cells == 0) bin.lo = p;
          bin.hi = p;
          bin.observed += y;
          bin.expected += p;
          ++bin.cells;
        }
      }
    }
    report.per_response[static_cast<std::size_t>(r)] = finish_response(std::move(raw));
    report.total += report.per_response[static_cast<std::size_t>(r)].x2;
  }
  return report;
}

std::vector<CheckCurve> check_curves(const MblDataset& data, const MeanModel& model,
                                     const Eigen::VectorXd& theta, double duration,
                                     double d_halfwidth, double t_halfwidth) {
  const int k = model.response_count();
  std::vector<CheckCurve> curves(static_cast<std::size_t>(k));
  for (int r = 0; r < k; ++r) {
    curves[static_cast<std::size_t>(r)].response = r;
    curves[static_cast<std::size_t>(r)].duration = duration;
  }
  // boundary-inclusive windows, robust to grid rounding
  const double eps = 1e-9;
  Eigen::VectorXd pi(k);
  for (int j = 1; j <= 19; ++j) {
    const double tj = 0.05 * j;
    model.evaluate(tj, duration, theta, pi, nullptr);
    long count = 0;
    Eigen::VectorXd events = Eigen::VectorXd::Zero(k);
    for (const auto& s : data.subjects()) {
      if (std::abs(s.duration - duration) > d_halfwidth + eps) continue;
      for (std::size_t o = 0; o < s.times.size(); ++o)
        if (std::abs(s.times[o] - tj) <= t_halfwidth + eps) {
          ++count;
          events += s.outcomes.row(static_cast<Eigen::Index>(o)).transpose();
        }
    }
    for (int r = 0; r < k; ++r) {
      CheckCurve& c = curves[static_cast<std::size_t>(r)];
      c.t.push_back(tj);
      c.predicted.push_back(pi[r]);
      c.n_window.push_back(count);
      if (count > 0) {
        c.empirical.push_back(events[r] / static_cast<double>(count));
      } else {
        c.empirical.push_back(std::nullopt);
      }
    }
  }
  return curves;
}

namespace {

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

std::string hl_report_text(const HlReport& report) {
  std::string out = "k      X_k^2\n";
  for (std::size_t r = 0; r < report.per_response.size(); ++r) {
    out += std::to_string(r + 1);
    out += "      ";
    out += fmt(report.per_response[r].x2, "%.6g");
    if (report.per_response[r].degenerate) out += "  (degenerate: <2 nonempty bins)";
    out += '\n';
  }
  out += "total  " + fmt(report.total, "%.6g") + "\n";
  out += "reference points: chi2(8) 95th = " + fmt(HlReport::kChi2_8_95, "%.4g") +
         " per response; aggregate band [" + fmt(HlReport::kChi2_64_95, "%.4g") + ", " +
         fmt(HlReport::kScaled8Chi2_8_95, "%.6g") + "]\n";
  out += std::string("per-response test: ") + (report.all_responses_pass() ? "pass" : "fail") +
         "; aggregate test: " + (report.aggregate_pass() ? "pass" : "fail") + "\n";
  return out;
}

std::string hl_report_json(const HlReport& report) {
  json per = json::array();
  for (const auto& r : report.per_response) {
    json bins = json::array();
    for (const auto& b : r.bins)
      bins.push_back({{"lo", b.lo},
                      {"hi", b.hi},
                      {"observed", b.observed},
                      {"expected", b.expected},
                      {"cells", b.cells}});
    per.push_back({{"x2", r.x2}, {"degenerate", r.degenerate}, {"bins", bins}});
  }
  return json{{"per_response", per},
              {"total", report.total},
              {"thresholds",
               {{"chi2_8_95", HlReport::kChi2_8_95},
                {"chi2_64_95", HlReport::kChi2_64_95},
                {"scaled_8chi2_8_95", HlReport::kScaled8Chi2_8_95}}},
              {"all_responses_pass", report.all_responses_pass()},
              {"aggregate_pass", report.aggregate_pass()}}
      .dump(2);
}

std::string check_curve_csv(const CheckCurve& curve) {
  std::string out = "t,predicted,empirical,n_window\n";
  for (std::size_t i = 0; i < curve.t.size(); ++i) {
    out += fmt(curve.t[i]) + "," + fmt(curve.predicted[i]) + ",";
    out += curve.empirical[i] ? fmt(*curve.empirical[i]) : "NA";
    out += "," + std::to_string(curve.n_window[i]) + "\n";
  }
  return out;
}

std::string check_curves_svg(const std::vector<CheckCurve>& curves) {
  const int panel_w = 220, panel_h = 170, margin = 34, cols = 4;
  const int n = static_cast<int>(curves.size());
  const int rows = (n + cols - 1) / cols;
  const int width = cols * panel_w + 20;
  const int height = rows * panel_h + 30;

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
                    "\" height=\"" + std::to_string(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int i = 0; i < n; ++i) {
    const CheckCurve& c = curves[static_cast<std::size_t>(i)];
    const double x0 = (i % cols) * panel_w + margin;
    const double y0 = (i / cols) * panel_h + 20;
    const double w = panel_w - margin - 10;
    const double h = panel_h - 50;
    auto px = [&](double t) { return x0 + t * w; };
    auto py = [&](double p) { return y0 + (1.0 - p) * h; };

    svg += "<rect x=\"" + fmt(x0) + "\" y=\"" + fmt(y0) + "\" width=\"" + fmt(w) +
           "\" height=\"" + fmt(h) + "\" fill=\"none\" stroke=\"#999\"/>\n";
    svg += "<text x=\"" + fmt(x0 + w / 2) + "\" y=\"" + fmt(y0 + h + 16) +
           "\" text-anchor=\"middle\" font-size=\"11\">y" + std::to_string(c.response + 1) +
           ", d=" + fmt(c.duration, "%.4g") + "</text>\n";
    for (double tick : {0.0, 0.5, 1.0}) {
      svg += "<text x=\"" + fmt(x0 - 4) + "\" y=\"" + fmt(py(tick) + 3) +
             "\" text-anchor=\"end\" font-size=\"9\">" + fmt(tick, "%.1f") + "</text>\n";
    }
    std::string pts;
    for (std::size_t j = 0; j < c.t.size(); ++j)
      pts += fmt(px(c.t[j])) + "," + fmt(py(c.predicted[j])) + " ";
    svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";
    for (std::size_t j = 0; j < c.t.size(); ++j)
      if (c.empirical[j])
        svg += "<circle cx=\"" + fmt(px(c.t[j])) + "\" cy=\"" + fmt(py(*c.empirical[j])) +
               "\" r=\"2.5\" fill=\"#d62728\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace mbl
