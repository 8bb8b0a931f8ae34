#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "streamcpd/common.hpp"

namespace streamcpd {

struct NormalSpec {
  double mean = 0.0;
  double sigma = 1.0;
};

struct UniformSpec {
  double lo = 0.0;
  double hi = 1.0;
};

struct PoissonSpec {
  double rate = 1.0;
};

struct GammaSpec {
  double shape = 1.0;
  double scale = 1.0;
};

struct LogNormalSpec {
  double log_mean = 0.0;
  double log_sigma = 1.0;
};

struct MixtureComponent {
  double weight = 1.0;
  double mean = 0.0;
  double sigma = 1.0;
};

struct GaussianMixtureSpec {
  std::vector<MixtureComponent> components;
};

struct MvNormalSpec {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

using DistributionSpec = std::variant<NormalSpec, UniformSpec, PoissonSpec, GammaSpec,
                                      LogNormalSpec, GaussianMixtureSpec, MvNormalSpec>;

struct Segment {
  DistributionSpec dist;
  std::size_t length = 0;
};

std::size_t spec_dim(const DistributionSpec& spec);
/// Theoretical per-coordinate mean and deviation of a distribution spec.
std::vector<double> spec_mean(const DistributionSpec& spec);
std::vector<double> spec_sigma(const DistributionSpec& spec);
void validate_spec(const DistributionSpec& spec);
std::string describe(const DistributionSpec& spec);

/// A generated stream and the indices where its regime switches. Regenerating
/// with the same description and seed reproduces identical bytes.
struct StreamWithTruth {
  std::size_t dim = 1;
  std::vector<double> data;  // row-major, size() * dim values
  std::vector<std::uint64_t> truth;
  std::uint64_t seed = 0;
  std::string spec;
  std::vector<Segment> segments;

  std::size_t size() const { return dim == 0 ? 0 : data.size() / dim; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * dim, dim}; }
  double scalar(std::size_t i) const { return data[i * dim]; }
};

/// Concatenated i.i.d. segments; truth holds the cumulative boundaries. Each
/// segment draws from a seed derived from (seed, segment index), so segment
/// content does not depend on the lengths of earlier segments.
StreamWithTruth gen_piecewise(std::span<const Segment> segments, std::uint64_t seed);

/// Replaces floor(fraction * n) uniformly chosen rows with spikes placed at
/// segment mean plus/minus magnitude segment deviations. Truth is unchanged.
StreamWithTruth inject_outliers(StreamWithTruth stream, double fraction, double magnitude_sigmas,
                                std::uint64_t seed);

namespace suite {

/// Gaussian segments with freshly drawn (mean, sigma) each period; consecutive
/// means are kept at least six deviations apart so boundaries are real.
StreamWithTruth normal_switch(std::size_t n, std::size_t period, std::uint64_t seed);

/// Alternates Gaussian and uniform segments with the same separation policy.
StreamWithTruth normal_uniform(std::size_t n, std::size_t period, std::uint64_t seed);

StreamWithTruth poisson_alternating(std::size_t n, std::size_t changepoints, std::uint64_t seed);
StreamWithTruth gamma_alternating(std::size_t n, std::size_t changepoints, std::uint64_t seed);
StreamWithTruth lognormal_alternating(std::size_t n, std::size_t changepoints, std::uint64_t seed);
StreamWithTruth mixed_gaussian(std::size_t n, std::size_t changepoints, std::uint64_t seed);

/// Two-dimensional Gaussian streams, 1000 points per regime.
StreamWithTruth mv_mean_drift(std::uint64_t seed);
StreamWithTruth mv_variance_drift(std::uint64_t seed);
StreamWithTruth mv_covariance_drift(std::uint64_t seed);

/// Drift-free Gaussian stream, handy for false-positive checks.
StreamWithTruth constant_normal(std::size_t n, double mean, double sigma, std::uint64_t seed);

}  // namespace suite

}  // namespace streamcpd
