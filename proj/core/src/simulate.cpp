#include "mbl/simulate.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <random>

#include "mbl/errors.hpp"
#include "mbl/numeric.hpp"

namespace mbl {

using nlohmann::json;

int SimDesign::n_subjects() const {
  int n = 0;
  for (const auto& g : groups) n += g.count;
  return n;
}

int SimDesign::n_responses() const {
  if (const auto* pv = std::get_if<ParamVector>(&model)) return static_cast<int>(pv->link_coeffs.size());
  return std::get<SharedBetaParams>(model).n_responses();
}

void SimDesign::validate() const {
  if (groups.empty() || n_subjects() < 1) throw ConfigError("SimDesign: no subjects");
  for (const auto& g : groups) {
    if (g.count < 1) throw ConfigError("SimDesign: group count must be >= 1");
    if (g.n_obs < 1) throw ConfigError("SimDesign: n_obs must be >= 1");
    if (!(g.duration > 0.0) || !std::isfinite(g.duration))
      throw ConfigError("SimDesign: duration must be positive");
  }
  if (n_responses() < 1) throw ConfigError("SimDesign: generating model has no responses");
  if (const auto* pv = std::get_if<ParamVector>(&model)) pv->validate();
}

namespace {

// 53-bit uniform in [0,1) from one 64-bit engine output
double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

std::mt19937_64 subject_engine(std::uint64_t seed, int subject_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(subject_index)};
  return std::mt19937_64(seq);
}

}  // namespace

MblDataset simulate_general(const SimDesign& design) {
  design.validate();
  const int K = design.n_responses();
  const SharedBetaParams* shared = std::get_if<SharedBetaParams>(&design.model);
  const ParamVector* latent = std::get_if<ParamVector>(&design.model);

  std::vector<Subject> subjects;
  subjects.reserve(static_cast<std::size_t>(design.n_subjects()));
  int subject_index = 0;
  for (const auto& g : design.groups) {
    for (int c = 0; c < g.count; ++c, ++subject_index) {
      Subject s;
      s.duration = g.duration;
      s.times.resize(static_cast<std::size_t>(g.n_obs));
      const double denom = design.grid == TimeGrid::kRight ? g.n_obs : g.n_obs + 1;
      for (int j = 0; j < g.n_obs; ++j) s.times[static_cast<std::size_t>(j)] = (j + 1) / denom;
      s.outcomes.resize(g.n_obs, K);
      auto eng = subject_engine(design.seed, subject_index);
      for (int j = 0; j < g.n_obs; ++j) {
        const double t = s.times[static_cast<std::size_t>(j)];
        Eigen::VectorXd pi(K);
        if (shared) {
          for (int k = 0; k < K; ++k) pi[k] = shared->pi(t, k);
        } else {
          pi = eval_mean_vector(t, s.duration, *latent);
        }
        for (int k = 0; k < K; ++k) s.outcomes(j, k) = uniform01(eng) < pi[k] ? 1.0 : 0.0;
      }
      subjects.push_back(std::move(s));
    }
  }
  return MblDataset(std::move(subjects));
}

SimDesign section31_design(std::uint64_t seed, TimeGrid grid) {
  SharedBetaParams truth;
  truth.intercepts = Eigen::Vector3d(0.5, 0.5, 0.0);
  truth.slopes = Eigen::Vector3d(1.0, 1.0, 1.0);
  truth.curvature = -1.0;
  SimDesign design;
  design.groups = {{50, 5, 1.0}, {50, 6, 1.0}, {50, 7, 1.0}, {50, 8, 1.0}};
  design.grid = grid;
  design.model = truth;
  design.seed = seed;
  return design;
}

MblDataset simulate_section31(std::uint64_t seed, TimeGrid grid) {
  return simulate_general(section31_design(seed, grid));
}

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd from_std(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string to_json(const SimDesign& design) {
  json groups = json::array();
  for (const auto& g : design.groups)
    groups.push_back({{"count", g.count}, {"n_obs", g.n_obs}, {"duration", g.duration}});
  json model;
  if (const auto* shared = std::get_if<SharedBetaParams>(&design.model)) {
    model = {{"type", "shared_beta"},
             {"intercepts", to_std(shared->intercepts)},
             {"slopes", to_std(shared->slopes)},
             {"curvature", shared->curvature}};
  } else {
    const auto& pv = std::get<ParamVector>(design.model);
    model = json::parse(to_json(pv.spec(), pv));
    model["type"] = "latent";
  }
  return json{{"groups", groups},
              {"grid", design.grid == TimeGrid::kRight ? "right" : "interior"},
              {"model", model},
              {"seed", design.seed}}
      .dump(2);
}

SimDesign sim_design_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("SimDesign: bad JSON: ") + e.what());
  }
  SimDesign design;
  try {
    for (const auto& g : doc.at("groups")) {
      SubjectGroup grp;
      grp.count = g.at("count").get<int>();
      grp.n_obs = g.at("n_obs").get<int>();
      grp.duration = g.value("duration", 1.0);
      design.groups.push_back(grp);
    }
    const std::string grid = doc.value("grid", "right");
    if (grid == "right") {
      design.grid = TimeGrid::kRight;
    } else if (grid == "interior") {
      design.grid = TimeGrid::kInterior;
    } else {
      throw ConfigError("SimDesign: grid must be 'right' or 'interior'");
    }
    design.seed = doc.value("seed", std::uint64_t{0});
    const json& model = doc.at("model");
    const std::string type = model.value("type", "shared_beta");
    if (type == "shared_beta") {
      SharedBetaParams p;
      p.intercepts = from_std(model.at("intercepts").get<std::vector<double>>());
      p.slopes = from_std(model.at("slopes").get<std::vector<double>>());
      p.curvature = model.at("curvature").get<double>();
      if (p.slopes.size() != p.intercepts.size())
        throw ConfigError("SimDesign: intercepts/slopes length mismatch");
      design.model = p;
    } else if (type == "latent") {
      design.model = param_vector_from_json(model.dump());
    } else {
      throw ConfigError("SimDesign: unknown model type '" + type + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("SimDesign: ") + e.what());
  }
  design.validate();
  return design;
}

}  // namespace mbl
