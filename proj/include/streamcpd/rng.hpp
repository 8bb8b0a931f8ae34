#pragma once

#include <cstdint>
#include <random>

#include "streamcpd/common.hpp"

namespace streamcpd {

/// Sampler with fully specified algorithms on top of mt19937_64, so a given
/// seed produces the same stream on every platform. The standard library
/// distributions are implementation-defined and deliberately avoided.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on (0, 1]; never zero, so it is safe inside logs.
  double uniform01() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; the second value of each pair is cached.
  double normal();

  double gamma(double shape, double scale);

  std::uint64_t poisson(double rate);

  /// Derives an independent seed for a substream (segment, worker, ...).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace streamcpd
