#include "streamcpd/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "streamcpd/rng.hpp"

namespace streamcpd {

namespace {

struct DimVisitor {
  std::size_t operator()(const MvNormalSpec& s) const { return static_cast<std::size_t>(s.mean.size()); }
  template <class T>
  std::size_t operator()(const T&) const {
    return 1;
  }
};

double mixture_mean(const GaussianMixtureSpec& s) {
  double wsum = 0.0;
  double m = 0.0;
  for (const auto& c : s.components) {
    wsum += c.weight;
    m += c.weight * c.mean;
  }
  return m / wsum;
}

double mixture_sigma(const GaussianMixtureSpec& s) {
  const double m = mixture_mean(s);
  double wsum = 0.0;
  double v = 0.0;
  for (const auto& c : s.components) {
    wsum += c.weight;
    v += c.weight * (c.sigma * c.sigma + (c.mean - m) * (c.mean - m));
  }
  return std::sqrt(v / wsum);
}

void sample_into(const DistributionSpec& spec, Rng& rng, std::vector<double>& out);

struct SampleVisitor {
  Rng& rng;
  std::vector<double>& out;

  void operator()(const NormalSpec& s) { out.push_back(s.mean + s.sigma * rng.normal()); }
  void operator()(const UniformSpec& s) { out.push_back(rng.uniform(s.lo, s.hi)); }
  void operator()(const PoissonSpec& s) { out.push_back(static_cast<double>(rng.poisson(s.rate))); }
  void operator()(const GammaSpec& s) { out.push_back(rng.gamma(s.shape, s.scale)); }
  void operator()(const LogNormalSpec& s) {
    out.push_back(std::exp(s.log_mean + s.log_sigma * rng.normal()));
  }
  void operator()(const GaussianMixtureSpec& s) {
    double wsum = 0.0;
    for (const auto& c : s.components) wsum += c.weight;
    double pick = rng.uniform01() * wsum;
    for (const auto& c : s.components) {
      pick -= c.weight;
      if (pick <= 0.0) {
        out.push_back(c.mean + c.sigma * rng.normal());
        return;
      }
    }
    const auto& last = s.components.back();
    out.push_back(last.mean + last.sigma * rng.normal());
  }
  void operator()(const MvNormalSpec& s) {
    Eigen::LLT<Eigen::MatrixXd> llt(s.cov);
    Eigen::VectorXd z(s.mean.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
    const Eigen::VectorXd x = s.mean + llt.matrixL() * z;
    for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(x(i));
  }
};

void sample_into(const DistributionSpec& spec, Rng& rng, std::vector<double>& out) {
  SampleVisitor v{rng, out};
  std::visit(v, spec);
}

struct ValidateVisitor {
  void operator()(const NormalSpec& s) {
    if (!(s.sigma > 0.0) || !std::isfinite(s.mean) || !std::isfinite(s.sigma))
      throw ConfigError("normal segment needs finite mean and sigma > 0");
  }
  void operator()(const UniformSpec& s) {
    if (!(s.hi > s.lo) || !std::isfinite(s.lo) || !std::isfinite(s.hi))
      throw ConfigError("uniform segment needs finite lo < hi");
  }
  void operator()(const PoissonSpec& s) {
    if (!(s.rate > 0.0) || !std::isfinite(s.rate)) throw ConfigError("poisson segment needs rate > 0");
  }
  void operator()(const GammaSpec& s) {
    if (!(s.shape > 0.0) || !(s.scale > 0.0)) throw ConfigError("gamma segment needs shape, scale > 0");
  }
  void operator()(const LogNormalSpec& s) {
    if (!(s.log_sigma > 0.0) || !std::isfinite(s.log_mean))
      throw ConfigError("lognormal segment needs finite log mean and log sigma > 0");
  }
  void operator()(const GaussianMixtureSpec& s) {
    if (s.components.empty()) throw ConfigError("mixture needs at least one component");
    for (const auto& c : s.components) {
      if (!(c.weight > 0.0) || !(c.sigma > 0.0) || !std::isfinite(c.mean))
        throw ConfigError("mixture component needs weight, sigma > 0 and finite mean");
    }
  }
  void operator()(const MvNormalSpec& s) {
    if (s.mean.size() == 0 || s.cov.rows() != s.mean.size() || s.cov.cols() != s.mean.size())
      throw ConfigError("multivariate normal needs a square covariance matching the mean");
    if ((s.cov - s.cov.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw ConfigError("covariance must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(s.cov);
    if (llt.info() != Eigen::Success) throw ConfigError("covariance must be positive definite");
  }
};

struct DescribeVisitor {
  std::string operator()(const NormalSpec& s) {
    std::ostringstream os;
    os << "normal(" << s.mean << "," << s.sigma << ")";
    return os.str();
  }
  std::string operator()(const UniformSpec& s) {
    std::ostringstream os;
    os << "uniform(" << s.lo << "," << s.hi << ")";
    return os.str();
  }
  std::string operator()(const PoissonSpec& s) {
    std::ostringstream os;
    os << "poisson(" << s.rate << ")";
    return os.str();
  }
  std::string operator()(const GammaSpec& s) {
    std::ostringstream os;
    os << "gamma(" << s.shape << "," << s.scale << ")";
    return os.str();
  }
  std::string operator()(const LogNormalSpec& s) {
    std::ostringstream os;
    os << "lognormal(" << s.log_mean << "," << s.log_sigma << ")";
    return os.str();
  }
  std::string operator()(const GaussianMixtureSpec& s) {
    std::ostringstream os;
    os << "mixture(";
    for (std::size_t i = 0; i < s.components.size(); ++i) {
      if (i) os << ";";
      os << s.components[i].weight << "*N(" << s.components[i].mean << "," << s.components[i].sigma
         << ")";
    }
    os << ")";
    return os.str();
  }
  std::string operator()(const MvNormalSpec& s) {
    std::ostringstream os;
    os << "mvnormal(d=" << s.mean.size() << ")";
    return os.str();
  }
};

}  // namespace

std::size_t spec_dim(const DistributionSpec& spec) { return std::visit(DimVisitor{}, spec); }

std::vector<double> spec_mean(const DistributionSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::vector<double> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NormalSpec>) return {s.mean};
        if constexpr (std::is_same_v<T, UniformSpec>) return {(s.lo + s.hi) / 2.0};
        if constexpr (std::is_same_v<T, PoissonSpec>) return {s.rate};
        if constexpr (std::is_same_v<T, GammaSpec>) return {s.shape * s.scale};
        if constexpr (std::is_same_v<T, LogNormalSpec>)
          return {std::exp(s.log_mean + 0.5 * s.log_sigma * s.log_sigma)};
        if constexpr (std::is_same_v<T, GaussianMixtureSpec>) return {mixture_mean(s)};
        if constexpr (std::is_same_v<T, MvNormalSpec>) {
          std::vector<double> m(s.mean.size());
          for (Eigen::Index i = 0; i < s.mean.size(); ++i) m[static_cast<std::size_t>(i)] = s.mean(i);
          return m;
        }
      },
      spec);
}

std::vector<double> spec_sigma(const DistributionSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::vector<double> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NormalSpec>) return {s.sigma};
        if constexpr (std::is_same_v<T, UniformSpec>) return {(s.hi - s.lo) / std::sqrt(12.0)};
        if constexpr (std::is_same_v<T, PoissonSpec>) return {std::sqrt(s.rate)};
        if constexpr (std::is_same_v<T, GammaSpec>) return {std::sqrt(s.shape) * s.scale};
        if constexpr (std::is_same_v<T, LogNormalSpec>) {
          const double s2 = s.log_sigma * s.log_sigma;
          const double mean = std::exp(s.log_mean + 0.5 * s2);
          return {mean * std::sqrt(std::exp(s2) - 1.0)};
        }
        if constexpr (std::is_same_v<T, GaussianMixtureSpec>) return {mixture_sigma(s)};
        if constexpr (std::is_same_v<T, MvNormalSpec>) {
          std::vector<double> out(s.cov.rows());
          for (Eigen::Index i = 0; i < s.cov.rows(); ++i)
            out[static_cast<std::size_t>(i)] = std::sqrt(s.cov(i, i));
          return out;
        }
      },
      spec);
}

void validate_spec(const DistributionSpec& spec) { std::visit(ValidateVisitor{}, spec); }

std::string describe(const DistributionSpec& spec) { return std::visit(DescribeVisitor{}, spec); }

StreamWithTruth gen_piecewise(std::span<const Segment> segments, std::uint64_t seed) {
  if (segments.empty()) throw ConfigError("need at least one segment");
  const std::size_t dim = spec_dim(segments.front().dist);
  std::size_t total = 0;
  for (const auto& seg : segments) {
    validate_spec(seg.dist);
    if (seg.length == 0) throw ConfigError("segment lengths must be positive");
    if (spec_dim(seg.dist) != dim) throw ConfigError("segments must share one dimension");
    total += seg.length;
  }

  StreamWithTruth out;
  out.dim = dim;
  out.seed = seed;
  out.segments.assign(segments.begin(), segments.end());
  out.data.reserve(total * dim);

  std::ostringstream desc;
  std::uint64_t position = 0;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const auto& seg = segments[k];
    Rng rng(Rng::derive(seed, k));
    for (std::size_t i = 0; i < seg.length; ++i) sample_into(seg.dist, rng, out.data);
    position += seg.length;
    if (k + 1 < segments.size()) out.truth.push_back(position);
    if (k) desc << "|";
    desc << describe(seg.dist) << "x" << seg.length;
  }
  out.spec = desc.str();
  return out;
}

StreamWithTruth inject_outliers(StreamWithTruth stream, double fraction, double magnitude_sigmas,
                                std::uint64_t seed) {
  if (!(fraction >= 0.0) || fraction > 1.0) throw ConfigError("outlier fraction must be in [0, 1]");
  const std::size_t n = stream.size();
  const std::size_t count = static_cast<std::size_t>(fraction * static_cast<double>(n));
  if (count == 0) return stream;

  // Partial Fisher-Yates picks `count` distinct positions.
  Rng rng(Rng::derive(seed, 0x6f75746cULL));
  std::vector<std::uint64_t> positions(n);
  std::iota(positions.begin(), positions.end(), 0);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_u64() % (n - i));
    std::swap(positions[i], positions[j]);
  }
  positions.resize(count);
  std::sort(positions.begin(), positions.end());

  // Segment boundaries locate the regime whose moments shape each spike.
  std::vector<std::uint64_t> starts{0};
  for (auto b : stream.truth) starts.push_back(b);

  for (auto pos : positions) {
    const std::size_t seg =
        static_cast<std::size_t>(std::upper_bound(starts.begin(), starts.end(), pos) - starts.begin()) - 1;
    const auto mean = spec_mean(stream.segments[seg].dist);
    const auto sigma = spec_sigma(stream.segments[seg].dist);
    const double sign = rng.uniform01() <= 0.5 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < stream.dim; ++c)
      stream.data[pos * stream.dim + c] = mean[c] + sign * magnitude_sigmas * sigma[c];
  }

  std::ostringstream desc;
  desc << stream.spec << "+outliers(" << fraction << "," << magnitude_sigmas << ")";
  stream.spec = desc.str();
  return stream;
}

namespace suite {

namespace {

std::vector<std::size_t> split_lengths(std::size_t n, std::size_t pieces) {
  if (pieces == 0 || n < pieces) throw ConfigError("stream too short for the requested changepoints");
  const std::size_t base = n / pieces;
  std::vector<std::size_t> lengths(pieces, base);
  lengths.back() += n - base * pieces;
  return lengths;
}

}  // namespace

StreamWithTruth normal_switch(std::size_t n, std::size_t period, std::uint64_t seed) {
  if (period == 0 || n < period) throw ConfigError("period must be positive and at most n");
  Rng rng(Rng::derive(seed, 0x706172616dULL));
  std::vector<Segment> segments;
  double prev_mean = 0.0;
  double prev_sigma = 1.0;
  std::size_t remaining = n;
  bool first = true;
  while (remaining > 0) {
    const std::size_t len = std::min(period, remaining);
    const double sigma = rng.uniform(0.5, 2.0);
    double mean = rng.uniform(-40.0, 40.0);
    if (!first) {
      // Resample until the jump clearly separates the regimes.
      while (std::abs(mean - prev_mean) < 6.0 * std::max(sigma, prev_sigma))
        mean = rng.uniform(-40.0, 40.0);
    }
    segments.push_back({NormalSpec{mean, sigma}, len});
    prev_mean = mean;
    prev_sigma = sigma;
    first = false;
    remaining -= len;
  }
  return gen_piecewise(segments, seed);
}

StreamWithTruth normal_uniform(std::size_t n, std::size_t period, std::uint64_t seed) {
  if (period == 0 || n < period) throw ConfigError("period must be positive and at most n");
  Rng rng(Rng::derive(seed, 0x756e69666fULL));
  std::vector<Segment> segments;
  double prev_center = 0.0;
  double prev_spread = 1.0;
  std::size_t remaining = n;
  bool gaussian = true;
  bool first = true;
  while (remaining > 0) {
    const std::size_t len = std::min(period, remaining);
    const double spread = rng.uniform(0.5, 2.0);
    double center = rng.uniform(-40.0, 40.0);
    if (!first) {
      while (std::abs(center - prev_center) < 6.0 * std::max(spread, prev_spread))
        center = rng.uniform(-40.0, 40.0);
    }
    if (gaussian) {
      segments.push_back({NormalSpec{center, spread}, len});
    } else {
      const double half_width = spread * std::sqrt(3.0);
      segments.push_back({UniformSpec{center - half_width, center + half_width}, len});
    }
    prev_center = center;
    prev_spread = spread;
    gaussian = !gaussian;
    first = false;
    remaining -= len;
  }
  return gen_piecewise(segments, seed);
}

StreamWithTruth poisson_alternating(std::size_t n, std::size_t changepoints, std::uint64_t seed) {
  const auto lengths = split_lengths(n, changepoints + 1);
  std::vector<Segment> segments;
  for (std::size_t k = 0; k < lengths.size(); ++k)
    segments.push_back({PoissonSpec{k % 2 == 0 ? 2.0 : 10.0}, lengths[k]});
  return gen_piecewise(segments, seed);
}

StreamWithTruth gamma_alternating(std::size_t n, std::size_t changepoints, std::uint64_t seed) {
  const auto lengths = split_lengths(n, changepoints + 1);
  std::vector<Segment> segments;
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    if (k % 2 == 0)
      segments.push_back({GammaSpec{2.0, 2.0}, lengths[k]});
    else
      segments.push_back({GammaSpec{10.0, 10.0}, lengths[k]});
  }
  return gen_piecewise(segments, seed);
}

StreamWithTruth lognormal_alternating(std::size_t n, std::size_t changepoints, std::uint64_t seed) {
  const auto lengths = split_lengths(n, changepoints + 1);
  std::vector<Segment> segments;
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    if (k % 2 == 0)
      segments.push_back({LogNormalSpec{3.0, 1.0}, lengths[k]});
    else
      segments.push_back({LogNormalSpec{10.0, 1.0}, lengths[k]});
  }
  return gen_piecewise(segments, seed);
}

StreamWithTruth mixed_gaussian(std::size_t n, std::size_t changepoints, std::uint64_t seed) {
  const auto lengths = split_lengths(n, changepoints + 1);
  const GaussianMixtureSpec low{{{1.0, 5.0, 1.0}, {1.0, 1.0, 1.3}, {1.0, 9.0, 1.3}}};
  const GaussianMixtureSpec high{{{1.0, 50.0, 1.0}, {1.0, 5.0, 1.3}, {1.0, 9.0, 5.0}}};
  std::vector<Segment> segments;
  for (std::size_t k = 0; k < lengths.size(); ++k)
    segments.push_back({k % 2 == 0 ? DistributionSpec{low} : DistributionSpec{high}, lengths[k]});
  return gen_piecewise(segments, seed);
}

namespace {

StreamWithTruth two_regime_2d(const Eigen::VectorXd& mean1, const Eigen::MatrixXd& cov1,
                              const Eigen::VectorXd& mean2, const Eigen::MatrixXd& cov2,
                              std::uint64_t seed) {
  std::vector<Segment> segments{{MvNormalSpec{mean1, cov1}, 1000}, {MvNormalSpec{mean2, cov2}, 1000}};
  return gen_piecewise(segments, seed);
}

}  // namespace

StreamWithTruth mv_mean_drift(std::uint64_t seed) {
  Eigen::VectorXd m1(2), m2(2);
  m1 << 1.0, 0.0;
  m2 << 10.0, 0.0;
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(2, 2);
  return two_regime_2d(m1, identity, m2, identity, seed);
}

StreamWithTruth mv_variance_drift(std::uint64_t seed) {
  Eigen::VectorXd m(2);
  m << 1.0, 0.0;
  const Eigen::MatrixXd cov1 = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd cov2 = Eigen::MatrixXd::Identity(2, 2);
  cov2(1, 1) = 10.0;
  return two_regime_2d(m, cov1, m, cov2, seed);
}

StreamWithTruth mv_covariance_drift(std::uint64_t seed) {
  Eigen::VectorXd m(2);
  m << 1.0, 0.0;
  const Eigen::MatrixXd cov1 = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd cov2(2, 2);
  cov2 << 1.0, 0.3, 0.3, 1.0;
  return two_regime_2d(m, cov1, m, cov2, seed);
}

StreamWithTruth constant_normal(std::size_t n, double mean, double sigma, std::uint64_t seed) {
  std::vector<Segment> segments{{NormalSpec{mean, sigma}, n}};
  return gen_piecewise(segments, seed);
}

}  // namespace suite

}  // namespace streamcpd
