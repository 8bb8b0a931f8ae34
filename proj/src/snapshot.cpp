#include "streamcpd/snapshot.hpp"

#include <json.hpp>

namespace streamcpd {

namespace {

using nlohmann::json;

constexpr int kVersion = 1;
constexpr const char* kFormat = "streamcpd-snapshot";

json config_to_json(const DetectorConfig& cfg) {
  return json{{"lambda", cfg.lambda},
              {"budget", cfg.budget},
              {"confirmation", cfg.confirmation},
              {"min_posterior", cfg.min_posterior},
              {"score_clip", cfg.score_clip},
              {"autotune", cfg.autotune},
              {"warmup_size", cfg.tune.warmup_size},
              {"alpha0", cfg.tune.alpha0},
              {"kappa0", cfg.tune.kappa0},
              {"epsilon", cfg.tune.epsilon}};
}

DetectorConfig config_from_json(const json& j) {
  DetectorConfig cfg;
  cfg.lambda = j.at("lambda").get<double>();
  cfg.budget = j.at("budget").get<std::size_t>();
  cfg.confirmation = j.at("confirmation").get<std::uint64_t>();
  cfg.min_posterior = j.at("min_posterior").get<double>();
  cfg.score_clip = j.at("score_clip").get<double>();
  cfg.autotune = j.at("autotune").get<bool>();
  cfg.tune.warmup_size = j.at("warmup_size").get<std::size_t>();
  cfg.tune.alpha0 = j.at("alpha0").get<double>();
  cfg.tune.kappa0 = j.at("kappa0").get<double>();
  cfg.tune.epsilon = j.at("epsilon").get<double>();
  return cfg;
}

json model_to_json(const NormalGammaParams& p) {
  return json{{"alpha", p.alpha}, {"beta", p.beta}, {"kappa", p.kappa}, {"mu", p.mu}};
}

NormalGammaParams model_from_json(const json& j, const NormalGammaParams*) {
  NormalGammaParams p;
  p.alpha = j.at("alpha").get<double>();
  p.beta = j.at("beta").get<double>();
  p.kappa = j.at("kappa").get<double>();
  p.mu = j.at("mu").get<double>();
  return p;
}

json model_to_json(const MvNormalGammaParams& p) {
  json mu = json::array();
  for (Eigen::Index i = 0; i < p.mu.size(); ++i) mu.push_back(p.mu(i));
  json beta = json::array();
  for (Eigen::Index r = 0; r < p.beta.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < p.beta.cols(); ++c) row.push_back(p.beta(r, c));
    beta.push_back(std::move(row));
  }
  return json{{"alpha", p.alpha}, {"kappa", p.kappa}, {"mu", std::move(mu)}, {"beta", std::move(beta)}};
}

MvNormalGammaParams model_from_json(const json& j, const MvNormalGammaParams*) {
  MvNormalGammaParams p;
  p.alpha = j.at("alpha").get<double>();
  p.kappa = j.at("kappa").get<double>();
  const auto& mu = j.at("mu");
  p.mu = Eigen::VectorXd(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) p.mu(static_cast<Eigen::Index>(i)) = mu[i].get<double>();
  const auto& beta = j.at("beta");
  p.beta = Eigen::MatrixXd(beta.size(), beta.size());
  for (std::size_t r = 0; r < beta.size(); ++r) {
    const auto& row = beta[r];
    if (row.size() != beta.size()) throw InputError("snapshot beta matrix is not square");
    for (std::size_t c = 0; c < row.size(); ++c)
      p.beta(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c].get<double>();
  }
  return p;
}

json observation_to_json(double x) { return json(x); }

json observation_to_json(const Eigen::VectorXd& x) {
  json out = json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(x(i));
  return out;
}

double observation_from_json(const json& j, const double*) { return j.get<double>(); }

Eigen::VectorXd observation_from_json(const json& j, const Eigen::VectorXd*) {
  Eigen::VectorXd x(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) x(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return x;
}

template <class Model>
std::string save_impl(const Detector<Model>& d, const char* kind) {
  json out;
  out["format"] = kFormat;
  out["version"] = kVersion;
  out["kind"] = kind;
  out["config"] = config_to_json(d.config());
  out["observations_seen"] = d.observations_seen();
  out["last_reported"] = d.last_reported_location();
  out["report_fence"] = d.report_fence();
  out["last_quiet"] = d.last_quiet_step();
  if (d.warmed_up()) out["prior"] = model_to_json(d.prior());
  json warmup = json::array();
  for (const auto& x : d.pending_warmup()) warmup.push_back(observation_to_json(x));
  out["warmup"] = std::move(warmup);
  json hyps = json::array();
  for (const auto& h : d.buffer().hypotheses) {
    hyps.push_back(json{{"start", h.start_index},
                        {"log_mass", h.log_mass},
                        {"model", model_to_json(h.model)}});
  }
  out["hypotheses"] = std::move(hyps);
  return out.dump();
}

json parse_checked(const std::string& text, const char* kind) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError("snapshot is not valid JSON");
  if (j.value("format", "") != kFormat) throw InputError("not a streamcpd snapshot");
  if (j.value("version", -1) != kVersion) throw InputError("unsupported snapshot version");
  if (kind && j.value("kind", "") != kind) throw InputError("snapshot kind mismatch");
  return j;
}

template <class Model>
Detector<Model> load_impl(const std::string& text, const char* kind) {
  const json j = parse_checked(text, kind);
  typename Detector<Model>::Parts parts;
  parts.config = config_from_json(j.at("config"));
  parts.observations_seen = j.at("observations_seen").get<std::uint64_t>();
  parts.last_reported = j.at("last_reported").get<std::uint64_t>();
  parts.fence = j.at("report_fence").get<std::uint64_t>();
  parts.last_quiet = j.at("last_quiet").get<std::uint64_t>();
  if (j.contains("prior")) parts.prior = model_from_json(j.at("prior"), static_cast<Model*>(nullptr));
  for (const auto& w : j.at("warmup"))
    parts.pending_warmup.push_back(
        observation_from_json(w, static_cast<typename Model::Observation*>(nullptr)));
  for (const auto& h : j.at("hypotheses")) {
    RunLengthHypothesis<Model> hyp;
    hyp.start_index = h.at("start").get<std::uint64_t>();
    hyp.log_mass = h.at("log_mass").get<double>();
    hyp.model = model_from_json(h.at("model"), static_cast<Model*>(nullptr));
    parts.hypotheses.push_back(std::move(hyp));
  }
  return Detector<Model>::from_parts(std::move(parts));
}

}  // namespace

std::string save_snapshot(const UnivariateDetector& d) { return save_impl(d, "univariate"); }
std::string save_snapshot(const MultivariateDetector& d) { return save_impl(d, "multivariate"); }

UnivariateDetector load_univariate_snapshot(const std::string& text) {
  return load_impl<NormalGammaParams>(text, "univariate");
}

MultivariateDetector load_multivariate_snapshot(const std::string& text) {
  return load_impl<MvNormalGammaParams>(text, "multivariate");
}

std::string snapshot_kind(const std::string& text) {
  const json j = parse_checked(text, nullptr);
  const std::string kind = j.value("kind", "");
  if (kind != "univariate" && kind != "multivariate") throw InputError("unknown snapshot kind");
  return kind;
}

}  // namespace streamcpd
