#pragma once

#include <cstddef>
#include <span>

#include "streamcpd/mv_normal_gamma.hpp"
#include "streamcpd/normal_gamma.hpp"

namespace streamcpd {

/// Settings for estimating the prior from the first observations of a stream.
/// mu0 is set to the warmup mean and beta0 to alpha0*kappa0*var/(kappa0+1), so
/// the prior predictive has the warmup scale regardless of alpha0 and kappa0.
/// The default alpha0 treats that scale as trustworthy: freshly started runs
/// then have predictives about as tight as established ones, which keeps the
/// posterior concentrated on the running regime instead of smearing across
/// recent start candidates.
struct AutotuneConfig {
  std::size_t warmup_size = 20;
  double alpha0 = 50.0;
  double kappa0 = 1.0;
  double epsilon = 1e-8;  // variance floor

  void validate() const {
    if (warmup_size < 2) throw ConfigError("warmup needs at least 2 samples");
    if (!(alpha0 > 0.0) || !(kappa0 > 0.0) || !(epsilon > 0.0))
      throw ConfigError("autotune needs alpha0, kappa0, epsilon > 0");
  }
};

NormalGammaParams autotune(std::span<const double> warmup, const AutotuneConfig& cfg);

/// Multivariate variant. alpha0 is raised to (d+1)/2 when necessary so the
/// predictive degrees of freedom stay positive, and the sample covariance is
/// shifted by epsilon*I when its smallest eigenvalue falls below epsilon.
MvNormalGammaParams autotune(std::span<const Eigen::VectorXd> warmup, const AutotuneConfig& cfg);

}  // namespace streamcpd
