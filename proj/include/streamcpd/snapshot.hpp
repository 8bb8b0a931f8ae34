#pragma once

#include <string>

#include "streamcpd/detector.hpp"

namespace streamcpd {

/// Versioned, field-tagged JSON snapshots of detector state. Doubles are
/// emitted with shortest round-trip formatting, so save followed by load
/// restores every field bit for bit.
std::string save_snapshot(const UnivariateDetector& d);
std::string save_snapshot(const MultivariateDetector& d);

UnivariateDetector load_univariate_snapshot(const std::string& text);
MultivariateDetector load_multivariate_snapshot(const std::string& text);

/// "univariate" or "multivariate"; throws InputError for anything else.
std::string snapshot_kind(const std::string& text);

}  // namespace streamcpd
