#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "streamcpd/common.hpp"

namespace streamcpd {

/// Two-sided CUSUM control chart with a burn-in phase that estimates the
/// in-control mean and deviation. Both tuning knobs are in deviation units.
struct CusumConfig {
  std::size_t burn_in = 1000;
  double drift = 0.5;      // reference value k
  double threshold = 4.0;  // decision interval h

  void validate() const {
    if (burn_in < 2) throw ConfigError("cusum burn-in needs at least 2 samples");
    if (!(drift >= 0.0) || !(threshold > 0.0))
      throw ConfigError("cusum needs drift >= 0 and threshold > 0");
  }
};

class CusumDetector {
 public:
  explicit CusumDetector(const CusumConfig& cfg);

  /// Feeds one observation; returns the global index of an alarm, if raised.
  /// An alarm zeroes both accumulators and restarts burn-in.
  std::optional<std::uint64_t> step(double x);

  std::uint64_t observations_seen() const { return t_; }
  bool in_burn_in() const { return count_ < cfg_.burn_in; }
  double s_plus() const { return s_plus_; }
  double s_minus() const { return s_minus_; }

 private:
  void finish_burn_in();

  CusumConfig cfg_;
  std::uint64_t t_ = 0;
  std::size_t count_ = 0;  // burn-in samples accumulated
  double mean_ = 0.0;
  double m2_ = 0.0;
  double sigma_ = 0.0;
  double s_plus_ = 0.0;
  double s_minus_ = 0.0;
};

}  // namespace streamcpd
