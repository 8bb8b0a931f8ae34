#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

namespace streamcpd {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Invalid configuration: bad hyperparameters, malformed specs, impossible budgets.
class ConfigError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Invalid data fed to an otherwise valid detector: NaN/Inf values, wrong dimension.
class InputError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown that survived the built-in recovery path.
class NumericalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// log(exp(a) + exp(b)) without leaving log space.
inline double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

/// log sum of exponentials over a contiguous range.
inline double log_sum_exp(std::span<const double> values) {
  double hi = kNegInf;
  for (double v : values) {
    if (v > hi) hi = v;
  }
  if (!std::isfinite(hi)) return hi;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

}  // namespace streamcpd
