#include "mbl/report.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mbl/errors.hpp"

namespace mbl {

using nlohmann::json;

std::unique_ptr<MeanModel> FitReport::make_model() const {
  if (family == Family::kLatent) return std::make_unique<LatentBetaModel>(spec);
  return std::make_unique<SharedBetaModel>(n_responses);
}

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd from_std(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json group_latent(const ModelSpec& spec, const Eigen::VectorXd& flat) {
  const ParamVector pv = ParamVector::from_flat(spec, flat);
  json link = json::array();
  for (const auto& c : pv.link_coeffs) link.push_back(to_std(c));
  return {{"a", to_std(pv.a_coeffs)}, {"b", to_std(pv.b_coeffs)}, {"link", link}};
}

json group_shared(const Eigen::VectorXd& flat) {
  const SharedBetaParams p = SharedBetaParams::from_flat(flat);
  return {{"intercepts", to_std(p.intercepts)},
          {"slopes", to_std(p.slopes)},
          {"curvature", p.curvature}};
}

Eigen::VectorXd ungroup_latent(const ModelSpec& spec, const json& grouped) {
  ParamVector pv;
  pv.a_coeffs = from_std(grouped.at("a").get<std::vector<double>>());
  pv.b_coeffs = from_std(grouped.at("b").get<std::vector<double>>());
  for (const auto& c : grouped.at("link"))
    pv.link_coeffs.push_back(from_std(c.get<std::vector<double>>()));
  if (pv.spec() != spec) throw ConfigError("fit report: coefficients do not match orders");
  return pv.flatten();
}

Eigen::VectorXd ungroup_shared(const json& grouped) {
  SharedBetaParams p;
  p.intercepts = from_std(grouped.at("intercepts").get<std::vector<double>>());
  p.slopes = from_std(grouped.at("slopes").get<std::vector<double>>());
  p.curvature = grouped.at("curvature").get<double>();
  return p.flatten();
}

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

std::string fit_report_json(const FitReport& report) {
  const FitResult& fit = report.fit;
  json model, se;
  if (report.family == FitReport::Family::kLatent) {
    model = {{"type", "latent"},
             {"orders",
              {{"a", report.spec.order_a},
               {"b", report.spec.order_b},
               {"link", report.spec.order_link}}},
             {"coefficients", group_latent(report.spec, fit.coefficients)}};
    se = group_latent(report.spec, fit.std_errors());
  } else {
    model = {{"type", "shared_beta"}, {"coefficients", group_shared(fit.coefficients)}};
    se = group_shared(fit.std_errors());
  }

  json alpha;
  switch (fit.corr.structure) {
    case CorrStructure::kIndependence:
      alpha = nullptr;
      break;
    case CorrStructure::kExchangeable:
      alpha = fit.corr.alpha;
      break;
    case CorrStructure::kUnstructured: {
      json rows = json::array();
      for (Eigen::Index i = 0; i < fit.corr.alpha_matrix.rows(); ++i)
        rows.push_back(to_std(fit.corr.alpha_matrix.row(i)));
      alpha = rows;
      break;
    }
  }

  json doc{{"model", model},
           {"std_errors", se},
           {"correlation", corr_structure_name(fit.corr.structure)},
           {"alpha", alpha},
           {"iterations", fit.iterations},
           {"converged", fit.converged},
           {"trace", fit.trace},
           {"p", fit.p},
           {"qic_u", fit.qic_u ? json(*fit.qic_u) : json(nullptr)}};
  return doc.dump(2);
}

FitReport fit_report_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("fit report: bad JSON: ") + e.what());
  }
  FitReport report;
  try {
    const json& model = doc.at("model");
    const std::string type = model.at("type").get<std::string>();
    if (type == "latent") {
      report.family = FitReport::Family::kLatent;
      const json& orders = model.at("orders");
      report.spec.order_a = orders.at("a").get<int>();
      report.spec.order_b = orders.at("b").get<int>();
      report.spec.order_link = orders.at("link").get<std::vector<int>>();
      report.spec.n_responses = static_cast<int>(report.spec.order_link.size());
      report.spec.validate();
      report.fit.coefficients = ungroup_latent(report.spec, model.at("coefficients"));
    } else if (type == "shared_beta") {
      report.family = FitReport::Family::kSharedBeta;
      report.fit.coefficients = ungroup_shared(model.at("coefficients"));
      report.n_responses =
          static_cast<int>(model.at("coefficients").at("intercepts").size());
    } else {
      throw ConfigError("fit report: unknown model type '" + type + "'");
    }

    const std::string corr = doc.value("correlation", "independence");
    report.fit.corr.structure = corr_structure_from_name(corr);
    if (report.fit.corr.structure == CorrStructure::kExchangeable) {
      report.fit.corr.alpha = doc.at("alpha").get<double>();
    } else if (report.fit.corr.structure == CorrStructure::kUnstructured) {
      const json& rows = doc.at("alpha");
      const auto n = static_cast<Eigen::Index>(rows.size());
      report.fit.corr.alpha_matrix.resize(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        report.fit.corr.alpha_matrix.row(i) =
            from_std(rows[static_cast<std::size_t>(i)].get<std::vector<double>>());
    }
    report.fit.iterations = doc.value("iterations", 0);
    report.fit.converged = doc.value("converged", false);
    report.fit.trace = doc.value("trace", std::vector<double>{});
    report.fit.p = doc.value("p", static_cast<int>(report.fit.coefficients.size()));
    if (doc.contains("qic_u") && !doc.at("qic_u").is_null())
      report.fit.qic_u = doc.at("qic_u").get<double>();
    if (doc.contains("std_errors")) {
      Eigen::VectorXd se;
      if (report.family == FitReport::Family::kLatent) {
        se = ungroup_latent(report.spec, doc.at("std_errors"));
      } else {
        se = ungroup_shared(doc.at("std_errors"));
      }
      report.fit.robust_cov = se.array().square().matrix().asDiagonal();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("fit report: ") + e.what());
  }
  return report;
}

FitReport load_fit_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open fit report: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return fit_report_from_json(buf.str());
}

std::string fit_report_text(const FitReport& report) {
  const FitResult& fit = report.fit;
  const Eigen::VectorXd se = fit.std_errors();

  struct Row {
    std::string name;
    Eigen::VectorXd est, se;
  };
  std::vector<Row> rows;
  if (report.family == FitReport::Family::kLatent) {
    const ParamVector est = ParamVector::from_flat(report.spec, fit.coefficients);
    const ParamVector ses = ParamVector::from_flat(report.spec, se);
    rows.push_back({"a", est.a_coeffs, ses.a_coeffs});
    rows.push_back({"b", est.b_coeffs, ses.b_coeffs});
    for (std::size_t k = 0; k < est.link_coeffs.size(); ++k)
      rows.push_back({"c" + std::to_string(k + 1), est.link_coeffs[k], ses.link_coeffs[k]});
  } else {
    const SharedBetaParams est = SharedBetaParams::from_flat(fit.coefficients);
    const SharedBetaParams ses = SharedBetaParams::from_flat(se);
    for (int k = 0; k < est.n_responses(); ++k) {
      Eigen::Vector2d e(est.intercepts[k], est.slopes[k]);
      Eigen::Vector2d s(ses.intercepts[k], ses.slopes[k]);
      rows.push_back({"c" + std::to_string(k + 1), e, s});
    }
    Eigen::VectorXd e(1), s(1);
    e << est.curvature;
    s << ses.curvature;
    rows.push_back({"beta", e, s});
  }

  Eigen::Index max_len = 0;
  for (const auto& row : rows) max_len = std::max(max_len, row.est.size());
  static const char* kOrderNames[] = {"Constant", "Linear", "Quadratic", "Cubic"};

  const int name_w = 6, col_w = 22;
  std::string out(name_w, ' ');
  for (Eigen::Index j = 0; j < max_len; ++j) {
    std::string head = j < 4 ? kOrderNames[j] : ("Order " + std::to_string(j));
    head.resize(static_cast<std::size_t>(col_w), ' ');
    out += head;
  }
  out += '\n';
  for (const auto& row : rows) {
    std::string line = row.name;
    line.resize(static_cast<std::size_t>(name_w), ' ');
    for (Eigen::Index j = 0; j < max_len; ++j) {
      std::string cell =
          j < row.est.size() ? fmt(row.est[j], "%.4f") + " (" + fmt(row.se[j], "%.4f") + ")" : "-";
      cell.resize(static_cast<std::size_t>(col_w), ' ');
      line += cell;
    }
    out += line + '\n';
  }
  out += "\nworking correlation: " + corr_structure_name(fit.corr.structure);
  if (fit.corr.structure == CorrStructure::kExchangeable)
    out += ", alpha = " + fmt(fit.corr.alpha);
  out += "\niterations: " + std::to_string(fit.iterations) +
         (fit.converged ? " (converged)" : " (not converged)") + "\n";
  if (fit.qic_u) out += "QIC_u: " + fmt(*fit.qic_u, "%.10g") + "\n";
  return out;
}

}  // namespace mbl
