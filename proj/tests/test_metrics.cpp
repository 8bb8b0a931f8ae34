#include <doctest.h>

#include <algorithm>
#include <random>

#include "streamcpd/metrics.hpp"

using namespace streamcpd;

TEST_CASE("exact prediction costs nothing under both penalty rules") {
  for (auto rule : {PenaltyRule::UnmatchedOnly, PenaltyRule::Literal}) {
    const auto report = mae_with_penalty({10}, {10}, 100, rule);
    CHECK(report.loss == 0.0);
    CHECK(report.matched.size() == 1);
    CHECK(report.unmatched_actual == 0);
    CHECK(report.unmatched_predicted.empty());
  }
}

TEST_CASE("a missed changepoint costs the stream length") {
  const auto report = mae_with_penalty({10, 20}, {12}, 100);
  CHECK(report.loss == 102.0);  // |10-12| + 1 * 100
  REQUIRE(report.matched.size() == 1);
  CHECK(report.matched[0] == std::pair<std::uint64_t, std::uint64_t>{10, 12});
  CHECK(report.unmatched_actual == 1);
}

TEST_CASE("surplus predictions cost their own indices") {
  const auto report = mae_with_penalty({10}, {12, 90}, 100);
  CHECK(report.loss == 92.0);  // |10-12| + 90
  REQUIRE(report.unmatched_predicted.size() == 1);
  CHECK(report.unmatched_predicted[0] == 90);

  const auto literal = mae_with_penalty({10}, {12, 90}, 100, PenaltyRule::Literal);
  CHECK(literal.loss == 104.0);  // |10-12| + (12 + 90)
}

TEST_CASE("empty inputs match trivially") {
  const auto report = mae_with_penalty({}, {}, 100);
  CHECK(report.loss == 0.0);
  CHECK(report.matched.empty());
  CHECK(match_changepoints({}, {}).empty());
}

TEST_CASE("greedy matching picks the globally closest pair first") {
  const auto pairs = match_changepoints({10, 20}, {12});
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0] == std::pair<std::uint64_t, std::uint64_t>{10, 12});
}

TEST_CASE("matching is insensitive to input order") {
  std::mt19937 gen(77);
  std::vector<std::uint64_t> actual{5, 40, 90, 150};
  std::vector<std::uint64_t> predicted{7, 42, 88, 149, 160};
  const auto base = mae_with_penalty(actual, predicted, 200);
  for (int round = 0; round < 20; ++round) {
    std::shuffle(actual.begin(), actual.end(), gen);
    std::shuffle(predicted.begin(), predicted.end(), gen);
    const auto shuffled = mae_with_penalty(actual, predicted, 200);
    CHECK(shuffled.loss == base.loss);
    CHECK(shuffled.matched == base.matched);
  }
}

TEST_CASE("perfect score degrades by exactly n per removed prediction") {
  const std::vector<std::uint64_t> truth{100, 300, 700};
  const std::uint64_t n = 1000;
  CHECK(mae_with_penalty(truth, truth, n).loss == 0.0);
  CHECK(mae_with_penalty(truth, {100, 300}, n).loss == static_cast<double>(n));
  CHECK(mae_with_penalty(truth, {100}, n).loss == 2.0 * static_cast<double>(n));
}

TEST_CASE("a report's loss is recomputable from its own fields") {
  const auto report = mae_with_penalty({10, 50, 80}, {11, 85, 95, 99}, 200);
  double recomputed = 0.0;
  for (const auto& [a, p] : report.matched)
    recomputed += static_cast<double>(a > p ? a - p : p - a);
  recomputed += static_cast<double>(report.unmatched_actual) * static_cast<double>(report.n);
  for (auto p : report.unmatched_predicted) recomputed += static_cast<double>(p);
  CHECK(report.loss == recomputed);
}

TEST_CASE("out-of-range indices are input errors") {
  CHECK_THROWS_AS(mae_with_penalty({100}, {10}, 100), InputError);
  CHECK_THROWS_AS(mae_with_penalty({10}, {100}, 100), InputError);
}
