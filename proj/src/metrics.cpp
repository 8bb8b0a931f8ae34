#include "streamcpd/metrics.hpp"

#include <algorithm>
#include <tuple>

namespace streamcpd {

namespace {

std::uint64_t distance(std::uint64_t a, std::uint64_t b) { return a > b ? a - b : b - a; }

}  // namespace

std::vector<std::pair<std::uint64_t, std::uint64_t>> match_changepoints(
    std::vector<std::uint64_t> actual, std::vector<std::uint64_t> predicted) {
  std::sort(actual.begin(), actual.end());
  std::sort(predicted.begin(), predicted.end());

  struct Candidate {
    std::uint64_t dist;
    std::uint64_t a;
    std::uint64_t p;
    std::size_t ai;
    std::size_t pi;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(actual.size() * predicted.size());
  for (std::size_t i = 0; i < actual.size(); ++i)
    for (std::size_t j = 0; j < predicted.size(); ++j)
      candidates.push_back({distance(actual[i], predicted[j]), actual[i], predicted[j], i, j});

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    return std::tie(x.dist, x.a, x.p) < std::tie(y.dist, y.a, y.p);
  });

  std::vector<bool> actual_used(actual.size(), false);
  std::vector<bool> predicted_used(predicted.size(), false);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  pairs.reserve(std::min(actual.size(), predicted.size()));
  for (const auto& c : candidates) {
    if (actual_used[c.ai] || predicted_used[c.pi]) continue;
    actual_used[c.ai] = true;
    predicted_used[c.pi] = true;
    pairs.emplace_back(c.a, c.p);
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

MaeReport mae_with_penalty(std::vector<std::uint64_t> actual, std::vector<std::uint64_t> predicted,
                           std::uint64_t n, PenaltyRule rule) {
  for (auto v : actual)
    if (v >= n) throw InputError("actual changepoint index out of range");
  for (auto v : predicted)
    if (v >= n) throw InputError("predicted changepoint index out of range");

  MaeReport report;
  report.n = n;
  report.matched = match_changepoints(actual, predicted);

  double loss = 0.0;
  for (const auto& [a, p] : report.matched) loss += static_cast<double>(distance(a, p));

  if (actual.size() >= predicted.size()) {
    report.unmatched_actual = actual.size() - predicted.size();
    loss += static_cast<double>(report.unmatched_actual) * static_cast<double>(n);
  } else {
    std::sort(predicted.begin(), predicted.end());
    std::vector<bool> used(predicted.size(), false);
    for (const auto& [a, p] : report.matched) {
      for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (!used[i] && predicted[i] == p) {
          used[i] = true;
          break;
        }
      }
    }
    for (std::size_t i = 0; i < predicted.size(); ++i)
      if (!used[i]) report.unmatched_predicted.push_back(predicted[i]);

    if (rule == PenaltyRule::Literal) {
      for (auto p : predicted) loss += static_cast<double>(p);
    } else {
      for (auto p : report.unmatched_predicted) loss += static_cast<double>(p);
    }
  }

  report.loss = loss;
  return report;
}

}  // namespace streamcpd
