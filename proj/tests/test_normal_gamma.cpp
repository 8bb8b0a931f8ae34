#include <doctest.h>

#include <cmath>
#include <random>

#include "streamcpd/normal_gamma.hpp"

using namespace streamcpd;

TEST_CASE("update applies all four formulas with the incoming kappa and mu") {
  const NormalGammaParams p{0.1, 0.01, 1.0, 0.0};
  const auto out = update(p, 2.0);
  CHECK(out.alpha == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(out.beta == doctest::Approx(1.01).epsilon(1e-14));
  CHECK(out.kappa == 2.0);
  CHECK(out.mu == 1.0);
}

TEST_CASE("observing the current location leaves beta and mu untouched") {
  const NormalGammaParams p{1.7, 0.4, 3.0, -2.5};
  const auto out = update(p, -2.5);
  CHECK(out.beta == p.beta);
  CHECK(out.mu == p.mu);
  CHECK(out.alpha == p.alpha + 0.5);
  CHECK(out.kappa == p.kappa + 1.0);
}

TEST_CASE("beta never decreases and kappa counts observations") {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> dist(-50.0, 50.0);
  NormalGammaParams p{0.5, 0.2, 1.0, 0.0};
  for (int i = 0; i < 200; ++i) {
    const auto out = update(p, dist(gen));
    CHECK(out.beta >= p.beta);
    CHECK(out.kappa == p.kappa + 1.0);
    p = out;
  }
}

TEST_CASE("predictive density at the location of a unit prior is exactly one quarter") {
  const NormalGammaParams p{1.0, 1.0, 1.0, 0.0};
  const double lp = predictive_logpdf(p, 0.0);
  CHECK(std::exp(lp) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(lp == doctest::Approx(-1.3862943611198906).epsilon(1e-12));
}

TEST_CASE("predictive is symmetric about mu") {
  const NormalGammaParams p{2.3, 0.8, 4.0, 0.7};
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> dist(0.0, 30.0);
  for (int i = 0; i < 50; ++i) {
    const double delta = dist(gen);
    CHECK(predictive_logpdf(p, p.mu + delta) ==
          doctest::Approx(predictive_logpdf(p, p.mu - delta)).epsilon(1e-12));
  }
}

TEST_CASE("predictive approaches the normal density in the data-rich limit") {
  const double sigma_sq = 2.25;
  const NormalGammaParams p{1e6, 1e6 * sigma_sq, 1e6, 1.5};
  for (double x : {1.5, 0.0, 3.0, -2.0, 6.5}) {
    const double normal = std::exp(-0.5 * std::log(2.0 * 3.14159265358979323846 * sigma_sq) -
                                   (x - p.mu) * (x - p.mu) / (2.0 * sigma_sq));
    CHECK(std::abs(std::exp(predictive_logpdf(p, x)) - normal) <= 1e-6);
  }
}

TEST_CASE("predictive integrates to one") {
  const NormalGammaParams p{2.0, 1.3, 2.0, -4.0};
  const double scale = std::sqrt(p.beta * (p.kappa + 1.0) / (p.alpha * p.kappa));
  const double lo = p.mu - 50.0 * scale;
  const double hi = p.mu + 50.0 * scale;
  const int steps = 200001;  // odd count for Simpson
  const double dx = (hi - lo) / (steps - 1);
  double integral = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double weight = (i == 0 || i == steps - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    integral += weight * std::exp(predictive_logpdf(p, lo + i * dx));
  }
  integral *= dx / 3.0;
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("sequential updates agree with the closed-form batch posterior") {
  std::mt19937 gen(29);
  std::normal_distribution<double> dist(3.0, 2.0);
  const NormalGammaParams prior{0.7, 0.3, 2.0, 1.0};

  NormalGammaParams sequential = prior;
  std::vector<double> xs;
  for (int n = 1; n <= 100; ++n) {
    const double x = dist(gen);
    xs.push_back(x);
    sequential = update(sequential, x);

    double mean = 0.0;
    for (double v : xs) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : xs) ss += (v - mean) * (v - mean);

    const double kappa_n = prior.kappa + n;
    const double mu_n = (prior.kappa * prior.mu + n * mean) / kappa_n;
    const double alpha_n = prior.alpha + 0.5 * n;
    const double beta_n = prior.beta + 0.5 * ss +
                          prior.kappa * n * (mean - prior.mu) * (mean - prior.mu) / (2.0 * kappa_n);

    CHECK(sequential.kappa == doctest::Approx(kappa_n).epsilon(1e-12));
    CHECK(sequential.mu == doctest::Approx(mu_n).epsilon(1e-10));
    CHECK(sequential.alpha == doctest::Approx(alpha_n).epsilon(1e-12));
    CHECK(sequential.beta == doctest::Approx(beta_n).epsilon(1e-10));
  }
}

TEST_CASE("non-finite observations are rejected") {
  const NormalGammaParams p;
  CHECK_THROWS_AS(update(p, std::nan("")), InputError);
  CHECK_THROWS_AS(predictive_logpdf(p, std::numeric_limits<double>::infinity()), InputError);
}

TEST_CASE("invalid parameters fail validation") {
  CHECK_THROWS_AS((NormalGammaParams{-1.0, 1.0, 1.0, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((NormalGammaParams{1.0, 0.0, 1.0, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((NormalGammaParams{1.0, 1.0, -2.0, 0.0}.validate()), ConfigError);
  CHECK_NOTHROW((NormalGammaParams{0.1, 0.01, 1.0, 0.0}.validate()));
}
