#include "streamcpd/cusum.hpp"

#include <cmath>

namespace streamcpd {

CusumDetector::CusumDetector(const CusumConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

void CusumDetector::finish_burn_in() {
  double variance = m2_ / (static_cast<double>(count_) - 1.0);
  if (variance < 1e-8) variance = 1e-8;
  sigma_ = std::sqrt(variance);
}

std::optional<std::uint64_t> CusumDetector::step(double x) {
  if (!std::isfinite(x)) throw InputError("observation must be finite");
  const std::uint64_t t = t_++;

  if (count_ < cfg_.burn_in) {
    // Welford accumulation; no alarms while estimating.
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
    if (count_ == cfg_.burn_in) finish_burn_in();
    return std::nullopt;
  }

  const double z = (x - mean_) / sigma_;
  s_plus_ = std::max(0.0, s_plus_ + z - cfg_.drift);
  s_minus_ = std::max(0.0, s_minus_ - z - cfg_.drift);

  if (s_plus_ >= cfg_.threshold || s_minus_ >= cfg_.threshold) {
    s_plus_ = 0.0;
    s_minus_ = 0.0;
    count_ = 0;
    mean_ = 0.0;
    m2_ = 0.0;
    return t;
  }
  return std::nullopt;
}

}  // namespace streamcpd
