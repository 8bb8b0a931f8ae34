#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "streamcpd/common.hpp"

namespace streamcpd {

/// Exponentially weighted moving average control chart with time-varying
/// control limits. weight = 1 collapses to a Shewhart chart on raw values.
struct EwmaConfig {
  std::size_t burn_in = 1000;
  double weight = 0.1;  // smoothing factor in (0, 1]
  double limit = 3.0;   // control width in deviation units

  void validate() const {
    if (burn_in < 2) throw ConfigError("ewma burn-in needs at least 2 samples");
    if (!(weight > 0.0) || weight > 1.0) throw ConfigError("ewma weight must be in (0, 1]");
    if (!(limit > 0.0)) throw ConfigError("ewma limit must be positive");
  }
};

class EwmaDetector {
 public:
  explicit EwmaDetector(const EwmaConfig& cfg);

  /// Feeds one observation; returns the global index of an alarm, if raised.
  /// An alarm resets the smoother and restarts burn-in.
  std::optional<std::uint64_t> step(double x);

  std::uint64_t observations_seen() const { return t_; }
  bool in_burn_in() const { return count_ < cfg_.burn_in; }
  double smoothed() const { return z_; }

 private:
  EwmaConfig cfg_;
  std::uint64_t t_ = 0;
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double sigma_ = 0.0;
  double z_ = 0.0;
  std::uint64_t steps_since_burn_in_ = 0;
};

}  // namespace streamcpd
