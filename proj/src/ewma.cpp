#include "streamcpd/ewma.hpp"

#include <cmath>

namespace streamcpd {

EwmaDetector::EwmaDetector(const EwmaConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

std::optional<std::uint64_t> EwmaDetector::step(double x) {
  if (!std::isfinite(x)) throw InputError("observation must be finite");
  const std::uint64_t t = t_++;

  if (count_ < cfg_.burn_in) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
    if (count_ == cfg_.burn_in) {
      double variance = m2_ / (static_cast<double>(count_) - 1.0);
      if (variance < 1e-8) variance = 1e-8;
      sigma_ = std::sqrt(variance);
      z_ = mean_;
      steps_since_burn_in_ = 0;
    }
    return std::nullopt;
  }

  const double w = cfg_.weight;
  z_ = w * x + (1.0 - w) * z_;
  ++steps_since_burn_in_;

  const double horizon = 1.0 - std::pow((1.0 - w) * (1.0 - w), static_cast<double>(steps_since_burn_in_));
  const double width = cfg_.limit * sigma_ * std::sqrt(w / (2.0 - w) * horizon);

  if (std::abs(z_ - mean_) > width) {
    count_ = 0;
    mean_ = 0.0;
    m2_ = 0.0;
    z_ = 0.0;
    return t;
  }
  return std::nullopt;
}

}  // namespace streamcpd
