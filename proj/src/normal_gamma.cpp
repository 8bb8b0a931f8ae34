#include "streamcpd/normal_gamma.hpp"

#include <numbers>

namespace streamcpd {

void NormalGammaParams::validate() const {
  const bool ok = alpha > 0.0 && std::isfinite(alpha) && beta > 0.0 && std::isfinite(beta) &&
                  kappa > 0.0 && std::isfinite(kappa) && std::isfinite(mu);
  if (!ok) throw ConfigError("normal-gamma parameters need alpha, beta, kappa > 0 and finite mu");
}

NormalGammaParams update(const NormalGammaParams& p, double x) {
  validate_observation(p, x);
  const double residual = x - p.mu;
  NormalGammaParams out;
  out.alpha = p.alpha + 0.5;
  out.beta = p.beta + p.kappa * residual * residual / (2.0 * (p.kappa + 1.0));
  out.mu = (p.kappa * p.mu + x) / (p.kappa + 1.0);
  out.kappa = p.kappa + 1.0;
  return out;
}

double predictive_logpdf(const NormalGammaParams& p, double x) {
  return scored_predictive_logpdf(p, x, 0.0).raw;
}

ScoredLogpdf scored_predictive_logpdf(const NormalGammaParams& p, double x, double z_cap) {
  validate_observation(p, x);
  const double nu = 2.0 * p.alpha;
  const double scale_sq = p.beta * (p.kappa + 1.0) / (p.alpha * p.kappa);
  const double z_sq = (x - p.mu) * (x - p.mu) / scale_sq;
  const double base = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                      0.5 * std::log(nu * std::numbers::pi) - 0.5 * std::log(scale_sq);
  ScoredLogpdf out;
  out.raw = base - 0.5 * (nu + 1.0) * std::log1p(z_sq / nu);
  if (z_cap > 0.0 && z_sq > z_cap * z_cap)
    out.clipped = base - 0.5 * (nu + 1.0) * std::log1p(z_cap * z_cap / nu);
  else
    out.clipped = out.raw;
  return out;
}

}  // namespace streamcpd
