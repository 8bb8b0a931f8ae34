#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "streamcpd/cusum.hpp"
#include "streamcpd/detector.hpp"
#include "streamcpd/ewma.hpp"

namespace streamcpd {

struct EventRecord {
  std::uint64_t t = 0;  // per-key position at detection
  std::uint64_t location = 0;
  std::optional<std::uint64_t> run_length;
  std::optional<double> posterior;
};

struct PointTrace {
  std::optional<EventRecord> event;
  std::optional<std::uint64_t> map_run_length;
  std::optional<double> map_posterior;
  std::optional<double> marginal_logpdf;
};

/// One detector instance bound to one key. Implementations wrap the run-length
/// engine and the control-chart baselines behind a uniform feed() call.
class KeyStream {
 public:
  virtual ~KeyStream() = default;
  virtual PointTrace feed(std::span<const double> values) = 0;
  /// State serialization; baselines return nullopt.
  virtual std::optional<std::string> snapshot() const { return std::nullopt; }
};

class KeyStreamFactory {
 public:
  virtual ~KeyStreamFactory() = default;
  virtual std::unique_ptr<KeyStream> create() const = 0;
  virtual std::unique_ptr<KeyStream> restore(const std::string& snapshot) const;
};

std::unique_ptr<KeyStreamFactory> make_bocpd_univariate_factory(
    const DetectorConfig& cfg, std::optional<NormalGammaParams> prior = std::nullopt);
std::unique_ptr<KeyStreamFactory> make_bocpd_multivariate_factory(
    const DetectorConfig& cfg, std::optional<MvNormalGammaParams> prior = std::nullopt);
std::unique_ptr<KeyStreamFactory> make_cusum_factory(const CusumConfig& cfg);
std::unique_ptr<KeyStreamFactory> make_ewma_factory(const EwmaConfig& cfg);

struct KeyedOptions {
  std::size_t workers = 1;
  bool log_transform = false;     // natural log of every value before scoring
  bool keep_point_traces = false; // buffer per-point diagnostics for plot output
};

struct KeyedEvent {
  std::string key;
  EventRecord event;
};

struct KeyedTraceRow {
  std::string key;
  std::uint64_t t = 0;
  PointTrace trace;
};

struct RunSummary {
  std::uint64_t rows = 0;
  std::uint64_t skipped = 0;  // transform failures and per-point input errors
  double seconds = 0.0;
  double points_per_second = 0.0;
  std::vector<std::pair<std::string, std::uint64_t>> events_per_key;  // first-seen key order
};

struct KeyedResult {
  std::vector<KeyedEvent> events;  // grouped by first-seen key, in per-key order
  std::vector<KeyedTraceRow> traces;
  RunSummary summary;
  std::map<std::string, std::string> snapshots;
};

/// Fans keys out over a fixed worker pool. Every key is owned by exactly one
/// worker, so per-key processing is strictly sequential; the merged output is
/// deterministic regardless of the worker count.
class KeyedRunner {
 public:
  KeyedRunner(std::shared_ptr<const KeyStreamFactory> factory, KeyedOptions options,
              std::map<std::string, std::string> initial_snapshots = {});
  ~KeyedRunner();

  KeyedRunner(const KeyedRunner&) = delete;
  KeyedRunner& operator=(const KeyedRunner&) = delete;

  void push(const std::string& key, std::span<const double> values);
  KeyedResult finish(bool collect_snapshots = false);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace streamcpd
