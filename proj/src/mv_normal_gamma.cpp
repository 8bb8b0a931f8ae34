#include "streamcpd/mv_normal_gamma.hpp"

#include <numbers>

namespace streamcpd {

void MvNormalGammaParams::validate() const {
  if (mu.size() == 0 || beta.rows() != mu.size() || beta.cols() != mu.size())
    throw ConfigError("multivariate normal-gamma parameters have inconsistent dimensions");
  if (!(alpha > 0.0) || !std::isfinite(alpha) || !(kappa > 0.0) || !std::isfinite(kappa))
    throw ConfigError("multivariate normal-gamma parameters need alpha, kappa > 0");
  if (!mu.allFinite() || !beta.allFinite())
    throw ConfigError("multivariate normal-gamma parameters must be finite");
  const double d = static_cast<double>(dim());
  if (!(2.0 * alpha - d + 1.0 > 0.0))
    throw ConfigError("alpha must exceed (d-1)/2 so the predictive degrees of freedom are positive");
  if ((beta - beta.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ConfigError("beta matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(beta, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    throw ConfigError("beta matrix must be positive definite");
}

void validate_observation(const MvNormalGammaParams& p, const Eigen::VectorXd& x) {
  if (x.size() != p.dim()) throw InputError("observation dimension mismatch");
  if (!x.allFinite()) throw InputError("observation must be finite");
}

MvNormalGammaParams update(const MvNormalGammaParams& p, const Eigen::VectorXd& x) {
  validate_observation(p, x);
  const Eigen::VectorXd residual = x - p.mu;
  MvNormalGammaParams out;
  out.alpha = p.alpha + 0.5;
  out.beta = p.beta + (p.kappa / (2.0 * (p.kappa + 1.0))) * (residual * residual.transpose());
  out.mu = (p.kappa * p.mu + x) / (p.kappa + 1.0);
  out.kappa = p.kappa + 1.0;
  return out;
}

double predictive_logpdf(const MvNormalGammaParams& p, const Eigen::VectorXd& x) {
  return scored_predictive_logpdf(p, x, 0.0).raw;
}

MvScoredLogpdf scored_predictive_logpdf(const MvNormalGammaParams& p, const Eigen::VectorXd& x,
                                        double z_cap) {
  validate_observation(p, x);
  const double d = static_cast<double>(p.dim());
  const double nu = 2.0 * p.alpha - d + 1.0;
  Eigen::MatrixXd scale = p.beta * (2.0 * (p.kappa + 1.0) / (p.kappa * nu));

  Eigen::LLT<Eigen::MatrixXd> llt(scale);
  if (llt.info() != Eigen::Success) {
    const double jitter = 1e-9 * scale.trace() / d;
    scale.diagonal().array() += jitter;
    llt.compute(scale);
    if (llt.info() != Eigen::Success)
      throw NumericalError("predictive scale matrix is not positive definite");
  }

  const Eigen::MatrixXd& chol = llt.matrixL();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < chol.rows(); ++i) log_det += 2.0 * std::log(chol(i, i));

  const Eigen::VectorXd solved = llt.matrixL().solve(x - p.mu);
  const double quad = solved.squaredNorm();

  const double base = std::lgamma(0.5 * (nu + d)) - std::lgamma(0.5 * nu) -
                      0.5 * d * std::log(nu * std::numbers::pi) - 0.5 * log_det;
  MvScoredLogpdf out;
  out.raw = base - 0.5 * (nu + d) * std::log1p(quad / nu);
  if (z_cap > 0.0 && quad > z_cap * z_cap)
    out.clipped = base - 0.5 * (nu + d) * std::log1p(z_cap * z_cap / nu);
  else
    out.clipped = out.raw;
  return out;
}

}  // namespace streamcpd
