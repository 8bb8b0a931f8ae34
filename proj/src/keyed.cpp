#include "streamcpd/keyed.hpp"

#include <chrono>
#include <cmath>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "streamcpd/snapshot.hpp"

namespace streamcpd {

namespace {

class BocpdUnivariateStream final : public KeyStream {
 public:
  explicit BocpdUnivariateStream(UnivariateDetector detector) : detector_(std::move(detector)) {}

  PointTrace feed(std::span<const double> values) override {
    if (values.size() != 1) throw InputError("expected a single value per observation");
    const std::uint64_t t = detector_.observations_seen();
    const StepResult step = detector_.step(values[0]);
    PointTrace trace;
    if (step.scored) {
      trace.map_run_length = step.map_run_length;
      trace.map_posterior = step.map_posterior;
      trace.marginal_logpdf = step.marginal_logpdf;
    }
    if (step.event) {
      trace.event = EventRecord{t, step.event->location, step.event->map_run_length,
                                step.event->map_posterior};
    }
    return trace;
  }

  std::optional<std::string> snapshot() const override { return save_snapshot(detector_); }

 private:
  UnivariateDetector detector_;
};

class BocpdMultivariateStream final : public KeyStream {
 public:
  explicit BocpdMultivariateStream(MultivariateDetector detector) : detector_(std::move(detector)) {}

  PointTrace feed(std::span<const double> values) override {
    Eigen::VectorXd x(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) x(static_cast<Eigen::Index>(i)) = values[i];
    const std::uint64_t t = detector_.observations_seen();
    const StepResult step = detector_.step(x);
    PointTrace trace;
    if (step.scored) {
      trace.map_run_length = step.map_run_length;
      trace.map_posterior = step.map_posterior;
      trace.marginal_logpdf = step.marginal_logpdf;
    }
    if (step.event) {
      trace.event = EventRecord{t, step.event->location, step.event->map_run_length,
                                step.event->map_posterior};
    }
    return trace;
  }

  std::optional<std::string> snapshot() const override { return save_snapshot(detector_); }

 private:
  MultivariateDetector detector_;
};

class BocpdUnivariateFactory final : public KeyStreamFactory {
 public:
  BocpdUnivariateFactory(DetectorConfig cfg, std::optional<NormalGammaParams> prior)
      : cfg_(cfg), prior_(std::move(prior)) {}

  std::unique_ptr<KeyStream> create() const override {
    if (prior_) return std::make_unique<BocpdUnivariateStream>(UnivariateDetector(cfg_, *prior_));
    return std::make_unique<BocpdUnivariateStream>(UnivariateDetector(cfg_));
  }

  std::unique_ptr<KeyStream> restore(const std::string& snapshot) const override {
    return std::make_unique<BocpdUnivariateStream>(load_univariate_snapshot(snapshot));
  }

 private:
  DetectorConfig cfg_;
  std::optional<NormalGammaParams> prior_;
};

class BocpdMultivariateFactory final : public KeyStreamFactory {
 public:
  BocpdMultivariateFactory(DetectorConfig cfg, std::optional<MvNormalGammaParams> prior)
      : cfg_(cfg), prior_(std::move(prior)) {}

  std::unique_ptr<KeyStream> create() const override {
    if (prior_) return std::make_unique<BocpdMultivariateStream>(MultivariateDetector(cfg_, *prior_));
    return std::make_unique<BocpdMultivariateStream>(MultivariateDetector(cfg_));
  }

  std::unique_ptr<KeyStream> restore(const std::string& snapshot) const override {
    return std::make_unique<BocpdMultivariateStream>(load_multivariate_snapshot(snapshot));
  }

 private:
  DetectorConfig cfg_;
  std::optional<MvNormalGammaParams> prior_;
};

class CusumStream final : public KeyStream {
 public:
  explicit CusumStream(const CusumConfig& cfg) : detector_(cfg) {}

  PointTrace feed(std::span<const double> values) override {
    if (values.size() != 1) throw InputError("control-chart baselines are univariate");
    PointTrace trace;
    if (const auto alarm = detector_.step(values[0]))
      trace.event = EventRecord{*alarm, *alarm, std::nullopt, std::nullopt};
    return trace;
  }

 private:
  CusumDetector detector_;
};

class EwmaStream final : public KeyStream {
 public:
  explicit EwmaStream(const EwmaConfig& cfg) : detector_(cfg) {}

  PointTrace feed(std::span<const double> values) override {
    if (values.size() != 1) throw InputError("control-chart baselines are univariate");
    PointTrace trace;
    if (const auto alarm = detector_.step(values[0]))
      trace.event = EventRecord{*alarm, *alarm, std::nullopt, std::nullopt};
    return trace;
  }

 private:
  EwmaDetector detector_;
};

class CusumFactory final : public KeyStreamFactory {
 public:
  explicit CusumFactory(const CusumConfig& cfg) : cfg_(cfg) { cfg_.validate(); }
  std::unique_ptr<KeyStream> create() const override { return std::make_unique<CusumStream>(cfg_); }

 private:
  CusumConfig cfg_;
};

class EwmaFactory final : public KeyStreamFactory {
 public:
  explicit EwmaFactory(const EwmaConfig& cfg) : cfg_(cfg) { cfg_.validate(); }
  std::unique_ptr<KeyStream> create() const override { return std::make_unique<EwmaStream>(cfg_); }

 private:
  EwmaConfig cfg_;
};

}  // namespace

std::unique_ptr<KeyStream> KeyStreamFactory::restore(const std::string&) const {
  throw ConfigError("this algorithm does not support snapshots");
}

std::unique_ptr<KeyStreamFactory> make_bocpd_univariate_factory(
    const DetectorConfig& cfg, std::optional<NormalGammaParams> prior) {
  return std::make_unique<BocpdUnivariateFactory>(cfg, std::move(prior));
}

std::unique_ptr<KeyStreamFactory> make_bocpd_multivariate_factory(
    const DetectorConfig& cfg, std::optional<MvNormalGammaParams> prior) {
  return std::make_unique<BocpdMultivariateFactory>(cfg, std::move(prior));
}

std::unique_ptr<KeyStreamFactory> make_cusum_factory(const CusumConfig& cfg) {
  return std::make_unique<CusumFactory>(cfg);
}

std::unique_ptr<KeyStreamFactory> make_ewma_factory(const EwmaConfig& cfg) {
  return std::make_unique<EwmaFactory>(cfg);
}

namespace {

struct KeyState {
  std::unique_ptr<KeyStream> stream;
  std::uint64_t position = 0;
  std::uint64_t skipped = 0;
  std::vector<KeyedEvent> events;
  std::vector<KeyedTraceRow> traces;
};

struct WorkItem {
  std::string key;
  std::vector<double> values;
};

class Worker {
 public:
  Worker(const KeyStreamFactory& factory, const KeyedOptions& options,
         const std::map<std::string, std::string>& snapshots)
      : factory_(factory), options_(options), snapshots_(snapshots) {}

  void start() {
    thread_ = std::thread([this] { run(); });
  }

  void enqueue(WorkItem item) {
    {
      std::unique_lock lock(mutex_);
      space_.wait(lock, [this] { return queue_.size() < kQueueLimit; });
      queue_.push_back(std::move(item));
    }
    ready_.notify_one();
  }

  void close() {
    {
      std::lock_guard lock(mutex_);
      closed_ = true;
    }
    ready_.notify_one();
    if (thread_.joinable()) thread_.join();
  }

  /// Synchronous path used when the pool has a single worker.
  void process_inline(const WorkItem& item) { process(item); }

  std::unordered_map<std::string, KeyState>& states() { return states_; }
  std::uint64_t skipped() const { return skipped_; }

 private:
  static constexpr std::size_t kQueueLimit = 4096;

  void run() {
    for (;;) {
      WorkItem item;
      {
        std::unique_lock lock(mutex_);
        ready_.wait(lock, [this] { return closed_ || !queue_.empty(); });
        if (queue_.empty()) {
          if (closed_) return;
          continue;
        }
        item = std::move(queue_.front());
        queue_.pop_front();
      }
      space_.notify_one();
      process(item);
    }
  }

  void process(const WorkItem& item) {
    auto it = states_.find(item.key);
    if (it == states_.end()) {
      KeyState state;
      const auto snap = snapshots_.find(item.key);
      state.stream = snap == snapshots_.end() ? factory_.create() : factory_.restore(snap->second);
      it = states_.emplace(item.key, std::move(state)).first;
    }
    KeyState& state = it->second;
    const std::uint64_t t = state.position++;

    std::vector<double> values(item.values);
    if (options_.log_transform) {
      for (auto& v : values) {
        if (!(v > 0.0)) {
          ++state.skipped;
          ++skipped_;
          --state.position;  // the observation never reached the detector
          return;
        }
        v = std::log(v);
      }
    }

    PointTrace trace;
    try {
      trace = state.stream->feed(values);
    } catch (const InputError&) {
      ++state.skipped;
      ++skipped_;
      --state.position;
      return;
    }
    if (trace.event) state.events.push_back({item.key, *trace.event});
    if (options_.keep_point_traces) state.traces.push_back({item.key, t, trace});
  }

  const KeyStreamFactory& factory_;
  const KeyedOptions& options_;
  const std::map<std::string, std::string>& snapshots_;
  std::unordered_map<std::string, KeyState> states_;
  std::uint64_t skipped_ = 0;

  std::thread thread_;
  std::mutex mutex_;
  std::condition_variable ready_;
  std::condition_variable space_;
  std::deque<WorkItem> queue_;
  bool closed_ = false;
};

}  // namespace

struct KeyedRunner::Impl {
  std::shared_ptr<const KeyStreamFactory> factory;
  KeyedOptions options;
  std::map<std::string, std::string> snapshots;
  std::vector<std::unique_ptr<Worker>> workers;
  std::vector<std::string> key_order;  // first-seen order
  std::unordered_map<std::string, std::size_t> key_to_worker;
  std::uint64_t rows = 0;
  std::chrono::steady_clock::time_point started;
  bool any_pushed = false;
  bool threaded = false;
};

KeyedRunner::KeyedRunner(std::shared_ptr<const KeyStreamFactory> factory, KeyedOptions options,
                         std::map<std::string, std::string> initial_snapshots)
    : impl_(std::make_unique<Impl>()) {
  if (!factory) throw ConfigError("keyed runner needs a detector factory");
  if (options.workers < 1) throw ConfigError("worker count must be at least 1");
  impl_->factory = std::move(factory);
  impl_->options = options;
  impl_->snapshots = std::move(initial_snapshots);
  impl_->threaded = options.workers > 1;
  for (std::size_t i = 0; i < options.workers; ++i) {
    impl_->workers.push_back(
        std::make_unique<Worker>(*impl_->factory, impl_->options, impl_->snapshots));
    if (impl_->threaded) impl_->workers.back()->start();
  }
}

KeyedRunner::~KeyedRunner() {
  if (impl_ && impl_->threaded)
    for (auto& w : impl_->workers) w->close();
}

void KeyedRunner::push(const std::string& key, std::span<const double> values) {
  if (!impl_->any_pushed) {
    impl_->started = std::chrono::steady_clock::now();
    impl_->any_pushed = true;
  }
  ++impl_->rows;
  auto it = impl_->key_to_worker.find(key);
  if (it == impl_->key_to_worker.end()) {
    const std::size_t shard = std::hash<std::string>{}(key) % impl_->workers.size();
    it = impl_->key_to_worker.emplace(key, shard).first;
    impl_->key_order.push_back(key);
  }
  WorkItem item{key, {values.begin(), values.end()}};
  if (impl_->threaded)
    impl_->workers[it->second]->enqueue(std::move(item));
  else
    impl_->workers[0]->process_inline(item);
}

KeyedResult KeyedRunner::finish(bool collect_snapshots) {
  if (impl_->threaded) {
    for (auto& w : impl_->workers) w->close();
    impl_->threaded = false;
  }

  KeyedResult result;
  result.summary.rows = impl_->rows;
  for (const auto& w : impl_->workers) result.summary.skipped += w->skipped();

  for (const auto& key : impl_->key_order) {
    const std::size_t shard = impl_->key_to_worker.at(key);
    auto& states = impl_->workers[shard]->states();
    const auto it = states.find(key);
    if (it == states.end()) continue;
    KeyState& state = it->second;
    result.summary.events_per_key.emplace_back(key, state.events.size());
    for (auto& e : state.events) result.events.push_back(std::move(e));
    for (auto& tr : state.traces) result.traces.push_back(std::move(tr));
    if (collect_snapshots) {
      if (const auto snap = state.stream->snapshot()) result.snapshots[key] = *snap;
    }
  }

  if (impl_->any_pushed) {
    const auto elapsed = std::chrono::steady_clock::now() - impl_->started;
    result.summary.seconds = std::chrono::duration<double>(elapsed).count();
    if (result.summary.seconds > 0.0)
      result.summary.points_per_second =
          static_cast<double>(impl_->rows) / result.summary.seconds;
  }
  return result;
}

}  // namespace streamcpd
