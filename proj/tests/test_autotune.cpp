#include <doctest.h>

#include <random>
#include <vector>

#include "streamcpd/autotune.hpp"

using namespace streamcpd;

TEST_CASE("two-sample warmup pins mean and unbiased variance") {
  const std::vector<double> warmup{1.0, 3.0};
  AutotuneConfig cfg;
  cfg.warmup_size = 2;
  cfg.alpha0 = 0.1;
  cfg.kappa0 = 1.0;
  const auto prior = autotune(std::span<const double>(warmup), cfg);
  CHECK(prior.mu == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(prior.beta == doctest::Approx(0.1).epsilon(1e-14));  // 0.1 * 1 * 2 / 2
  CHECK(prior.alpha == 0.1);
  CHECK(prior.kappa == 1.0);
}

TEST_CASE("constant warmup engages the variance floor") {
  const std::vector<double> warmup{5.0, 5.0, 5.0};
  AutotuneConfig cfg;
  cfg.warmup_size = 3;
  const auto prior = autotune(std::span<const double>(warmup), cfg);
  CHECK(prior.mu == 5.0);
  CHECK(prior.beta ==
        doctest::Approx(cfg.alpha0 * cfg.kappa0 * cfg.epsilon / (cfg.kappa0 + 1.0)).epsilon(1e-12));
}

TEST_CASE("warmup shorter than two samples is a configuration error") {
  AutotuneConfig cfg;
  cfg.warmup_size = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  const std::vector<double> one{1.0};
  cfg.warmup_size = 2;
  CHECK_THROWS_AS(autotune(std::span<const double>(one), cfg), ConfigError);
}

TEST_CASE("large multivariate warmup recovers the generating covariance") {
  std::mt19937 gen(97);
  std::normal_distribution<double> dist(0.0, 1.0);
  // x = L z with L the Cholesky factor of C = [[2, 0.6], [0.6, 1]]
  Eigen::MatrixXd cov(2, 2);
  cov << 2.0, 0.6, 0.6, 1.0;
  const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(cov).matrixL();
  std::vector<Eigen::VectorXd> warmup;
  for (int i = 0; i < 10000; ++i) {
    Eigen::VectorXd z(2);
    z << dist(gen), dist(gen);
    warmup.push_back(chol * z);
  }
  AutotuneConfig cfg;
  cfg.warmup_size = warmup.size();
  cfg.alpha0 = 2.0;
  cfg.kappa0 = 1.0;
  const auto prior = autotune(std::span<const Eigen::VectorXd>(warmup), cfg);
  const Eigen::MatrixXd expected = cfg.alpha0 * cfg.kappa0 * cov / (cfg.kappa0 + 1.0);
  CHECK((prior.beta - expected).cwiseAbs().maxCoeff() < 0.15);
  CHECK(prior.mu.cwiseAbs().maxCoeff() < 0.1);
}

TEST_CASE("multivariate alpha floor keeps the predictive dof positive") {
  std::vector<Eigen::VectorXd> warmup;
  std::mt19937 gen(13);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXd x(3);
    x << dist(gen), dist(gen), dist(gen);
    warmup.push_back(x);
  }
  AutotuneConfig cfg;
  cfg.alpha0 = 0.1;  // would give negative dof at d = 3
  const auto prior = autotune(std::span<const Eigen::VectorXd>(warmup), cfg);
  CHECK(prior.alpha == doctest::Approx(2.0));  // (3 + 1) / 2
  CHECK_NOTHROW(prior.validate());
}

TEST_CASE("degenerate multivariate warmup is regularized") {
  std::vector<Eigen::VectorXd> warmup(10, Eigen::VectorXd::Constant(2, 4.0));
  AutotuneConfig cfg;
  cfg.warmup_size = 10;
  const auto prior = autotune(std::span<const Eigen::VectorXd>(warmup), cfg);
  CHECK_NOTHROW(prior.validate());
}
