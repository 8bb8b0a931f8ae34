#pragma once

#include <Eigen/Dense>

#include "streamcpd/common.hpp"

namespace streamcpd {

/// Multivariate counterpart of NormalGammaParams: beta is a d x d symmetric
/// positive definite matrix updated by rank-one increments, so the update rule
/// is the same as the scalar one applied to the outer product of the residual.
/// The posterior predictive is a multivariate Student-T with
/// nu = 2*alpha - d + 1 degrees of freedom, location mu and scale matrix
/// 2*beta*(kappa+1)/(kappa*nu).
struct MvNormalGammaParams {
  using Observation = Eigen::VectorXd;

  double alpha = 2.0;
  double kappa = 1.0;
  Eigen::VectorXd mu;
  Eigen::MatrixXd beta;

  Eigen::Index dim() const { return mu.size(); }
  void validate() const;
};

MvNormalGammaParams update(const MvNormalGammaParams& p, const Eigen::VectorXd& x);

/// Log density of the posterior predictive at x. If the scale matrix fails to
/// factorize, a jitter of 1e-9 * trace / d is added to the diagonal once; a
/// second failure raises NumericalError.
double predictive_logpdf(const MvNormalGammaParams& p, const Eigen::VectorXd& x);

struct MvScoredLogpdf {
  double raw;
  double clipped;  // Mahalanobis distance capped at z_cap; equals raw inside the cap
};

MvScoredLogpdf scored_predictive_logpdf(const MvNormalGammaParams& p, const Eigen::VectorXd& x,
                                        double z_cap);

void validate_observation(const MvNormalGammaParams& p, const Eigen::VectorXd& x);

}  // namespace streamcpd
