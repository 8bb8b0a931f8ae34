#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "streamcpd/common.hpp"

namespace streamcpd {

/// Penalty applied to surplus predictions. UnmatchedOnly sums the indices of
/// unmatched predictions; Literal sums every predicted index, which makes a
/// perfect match plus one stray prediction score worse than the formula most
/// comparisons expect. Both are kept so results can be compared either way.
enum class PenaltyRule { UnmatchedOnly, Literal };

struct MaeReport {
  double loss = 0.0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> matched;  // (actual, predicted)
  std::size_t unmatched_actual = 0;
  std::vector<std::uint64_t> unmatched_predicted;
  std::uint64_t n = 0;
};

/// Greedy one-to-one pairing by global closeness. Ties prefer the smaller
/// actual index, then the smaller predicted index. Inputs are sorted
/// internally, so argument order does not matter.
std::vector<std::pair<std::uint64_t, std::uint64_t>> match_changepoints(
    std::vector<std::uint64_t> actual, std::vector<std::uint64_t> predicted);

/// Sum of matched distances plus a penalty: n per missed changepoint, or the
/// surplus predicted indices themselves (per `rule`) when there are extras.
MaeReport mae_with_penalty(std::vector<std::uint64_t> actual, std::vector<std::uint64_t> predicted,
                           std::uint64_t n, PenaltyRule rule = PenaltyRule::UnmatchedOnly);

}  // namespace streamcpd
