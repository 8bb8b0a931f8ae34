#include "streamcpd/autotune.hpp"

namespace streamcpd {

NormalGammaParams autotune(std::span<const double> warmup, const AutotuneConfig& cfg) {
  cfg.validate();
  if (warmup.size() < cfg.warmup_size || warmup.size() < 2)
    throw ConfigError("not enough warmup samples");

  const double n = static_cast<double>(warmup.size());
  double mean = 0.0;
  for (double x : warmup) mean += x;
  mean /= n;

  double ss = 0.0;
  for (double x : warmup) ss += (x - mean) * (x - mean);
  double variance = ss / (n - 1.0);
  if (variance < cfg.epsilon) variance = cfg.epsilon;

  NormalGammaParams prior;
  prior.alpha = cfg.alpha0;
  prior.kappa = cfg.kappa0;
  prior.mu = mean;
  prior.beta = cfg.alpha0 * cfg.kappa0 * variance / (cfg.kappa0 + 1.0);
  prior.validate();
  return prior;
}

MvNormalGammaParams autotune(std::span<const Eigen::VectorXd> warmup, const AutotuneConfig& cfg) {
  cfg.validate();
  if (warmup.size() < cfg.warmup_size || warmup.size() < 2)
    throw ConfigError("not enough warmup samples");
  const Eigen::Index d = warmup.front().size();
  if (d == 0) throw ConfigError("warmup samples must be non-empty vectors");

  const double n = static_cast<double>(warmup.size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (const auto& x : warmup) {
    if (x.size() != d) throw InputError("warmup sample dimension mismatch");
    mean += x;
  }
  mean /= n;

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (const auto& x : warmup) {
    const Eigen::VectorXd r = x - mean;
    cov += r * r.transpose();
  }
  cov /= (n - 1.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() < cfg.epsilon)
    cov.diagonal().array() += cfg.epsilon;

  MvNormalGammaParams prior;
  prior.alpha = std::max(cfg.alpha0, (static_cast<double>(d) + 1.0) / 2.0);
  prior.kappa = cfg.kappa0;
  prior.mu = mean;
  prior.beta = prior.alpha * cfg.kappa0 * cov / (cfg.kappa0 + 1.0);
  prior.validate();
  return prior;
}

}  // namespace streamcpd
