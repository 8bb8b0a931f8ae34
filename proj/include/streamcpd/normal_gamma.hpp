#pragma once

#include "streamcpd/common.hpp"

namespace streamcpd {

/// Conjugate state for a Gaussian stream with unknown mean and precision.
/// The posterior predictive is a Student-T with 2*alpha degrees of freedom,
/// location mu and squared scale beta*(kappa+1)/(alpha*kappa).
struct NormalGammaParams {
  using Observation = double;

  double alpha = 2.0;
  double beta = 1.0;
  double kappa = 1.0;
  double mu = 0.0;

  void validate() const;
};

/// Absorbs one observation. Every formula uses the incoming kappa and mu.
NormalGammaParams update(const NormalGammaParams& p, double x);

/// Log density of the posterior predictive at x.
double predictive_logpdf(const NormalGammaParams& p, double x);

struct ScoredLogpdf {
  double raw;      // exact predictive log density
  double clipped;  // residual capped at z_cap scale units; equals raw inside the cap
};

/// Predictive log density with and without a cap on the standardized
/// residual. z_cap <= 0 disables the cap.
ScoredLogpdf scored_predictive_logpdf(const NormalGammaParams& p, double x, double z_cap);

inline void validate_observation(const NormalGammaParams&, double x) {
  if (!std::isfinite(x)) throw InputError("observation must be finite");
}

}  // namespace streamcpd
