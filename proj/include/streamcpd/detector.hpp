#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "streamcpd/autotune.hpp"
#include "streamcpd/common.hpp"

namespace streamcpd {

/// Prior over run endings. Only the memoryless (constant) form is implemented;
/// the probability that a run ends at any step is 1/lambda.
struct HazardSpec {
  double lambda = 250.0;

  double value() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
      throw ConfigError("hazard lambda must be positive and finite");
    return 1.0 / lambda;
  }
};

inline double hazard(const HazardSpec& spec) { return spec.value(); }

struct ChangepointEvent {
  std::uint64_t detected_at = 0;   // stream index of the observation that confirmed the change
  std::uint64_t location = 0;      // estimated first index of the new regime
  double map_posterior = 0.0;      // normalized mass of the winning hypothesis at detection
  std::uint64_t map_run_length = 0;
};

/// One candidate run: where it started, its log joint mass, and the conjugate
/// posterior over observations since the start.
template <class Model>
struct RunLengthHypothesis {
  std::uint64_t start_index = 0;
  double log_mass = 0.0;
  Model model{};
};

/// Capacity-bounded set of hypotheses, ordered by start index ascending.
template <class Model>
struct RunLengthBuffer {
  std::vector<RunLengthHypothesis<Model>> hypotheses;
  std::size_t capacity = 50;

  std::size_t size() const { return hypotheses.size(); }
  bool empty() const { return hypotheses.empty(); }

  /// Removes the lowest-mass hypothesis. Its mass is dropped, not moved; ties
  /// evict the smaller start index.
  void evict_lowest() {
    auto victim = hypotheses.begin();
    for (auto it = hypotheses.begin() + 1; it != hypotheses.end(); ++it) {
      if (it->log_mass < victim->log_mass) victim = it;
    }
    hypotheses.erase(victim);
  }

  /// Softmax of the stored log masses, in hypothesis order.
  std::vector<double> normalized_masses() const {
    double norm = kNegInf;
    for (const auto& h : hypotheses) norm = log_add_exp(norm, h.log_mass);
    std::vector<double> out;
    out.reserve(hypotheses.size());
    for (const auto& h : hypotheses) out.push_back(std::exp(h.log_mass - norm));
    return out;
  }
};

struct DetectorConfig {
  double lambda = 250.0;
  std::size_t budget = 50;
  /// Observations the leading change candidate must span before it is
  /// reported. The dwell filters one-off spikes, whose explanations collapse
  /// within a few points, and gives near-tied start indices time to settle on
  /// the true boundary before the location is frozen.
  std::uint64_t confirmation = 60;
  /// Minimum normalized mass the leading fresh run must hold at declaration.
  /// Real changes condense the posterior onto the new run within a few dozen
  /// points; slow fragmentation of a stale posterior never concentrates this
  /// far on a single start.
  double min_posterior = 0.85;
  /// Cap on the standardized residual used when scoring hypothesis masses.
  /// A wild point then costs every run about the same, so isolated spikes
  /// cancel in normalization instead of handing the posterior to a restart.
  /// Zero disables the cap and scores with the exact predictive. Posterior
  /// updates and reported densities always use the raw observation.
  double score_clip = 5.0;
  bool autotune = true;
  AutotuneConfig tune{};

  void validate() const {
    HazardSpec{lambda}.value();
    if (budget < 1) throw ConfigError("budget must be at least 1");
    if (!(min_posterior >= 0.0) || min_posterior > 1.0)
      throw ConfigError("min_posterior must be in [0, 1]");
    if (!(score_clip >= 0.0)) throw ConfigError("score_clip must be non-negative");
    if (autotune) tune.validate();
  }
};

struct StepResult {
  bool scored = false;  // false while the warmup buffer is still filling
  std::optional<ChangepointEvent> event;
  std::optional<double> marginal_logpdf;  // mixture predictive of x under the pre-step posterior
  std::uint64_t map_run_length = 0;
  double map_posterior = 0.0;
};

/// Online changepoint detector over a bounded run-length buffer.
///
/// Each observation grows every stored hypothesis by one point and adds a
/// single fresh hypothesis fed by the hazard share of every run. When the
/// buffer exceeds its budget the lowest-mass hypothesis is evicted, so time
/// and memory per observation are independent of the stream position.
/// Detectors are plain values: copying one forks the state, and identical
/// inputs replay to bit-identical outputs.
template <class Model>
class Detector {
 public:
  using Observation = typename Model::Observation;

  /// Prior is estimated from the first tune.warmup_size observations, which
  /// are consumed, never scored. Stream indices stay global.
  explicit Detector(const DetectorConfig& cfg) : cfg_(cfg) {
    cfg_.autotune = true;
    cfg_.validate();
    init_hazard();
    buffer_.capacity = cfg_.budget;
  }

  Detector(const DetectorConfig& cfg, const Model& prior) : cfg_(cfg), prior_(prior) {
    cfg_.autotune = false;
    cfg_.validate();
    prior.validate();
    init_hazard();
    buffer_.capacity = cfg_.budget;
  }

  StepResult step(const Observation& x) {
    if (!prior_.has_value()) return warmup_step(x);
    validate_observation(*prior_, x);

    const std::uint64_t t = t_;
    StepResult out;
    out.scored = true;
    auto& hyps = buffer_.hypotheses;

    if (hyps.empty()) {
      // First scored observation: one hypothesis, all of the mass. The stream
      // start is not a changepoint, so reporting is fenced at this index.
      out.marginal_logpdf = predictive_logpdf(*prior_, x);
      hyps.push_back({t, 0.0, update(*prior_, x)});
      fence_ = t;
      last_quiet_ = t;
      last_reported_ = t;
      out.map_run_length = 0;
      out.map_posterior = 1.0;
      ++t_;
      return out;
    }

    preds_.clear();
    double marginal = kNegInf;
    double scored_marginal = kNegInf;
    for (const auto& h : hyps) {
      const auto lp = scored_predictive_logpdf(h.model, x, cfg_.score_clip);
      preds_.push_back(lp.clipped);
      marginal = log_add_exp(marginal, h.log_mass + lp.raw);
      scored_marginal = log_add_exp(scored_marginal, h.log_mass + lp.clipped);
    }
    out.marginal_logpdf = marginal;

    // Fresh run: every hypothesis routes hazard mass through its own
    // predictive of x, so a surprise charges all branches alike and only
    // sustained evidence moves the posterior. The new run's model starts from
    // the prior and absorbs x.
    const double newborn_mass = scored_marginal + log_hazard_;

    for (std::size_t i = 0; i < hyps.size(); ++i) {
      hyps[i].log_mass += log_growth_ + preds_[i];
      hyps[i].model = update(hyps[i].model, x);
    }
    hyps.push_back({t, newborn_mass, update(*prior_, x)});

    // Dead hypotheses (possible only when hazard == 1) are dropped so stored
    // masses stay finite between steps.
    std::erase_if(hyps, [](const auto& h) { return h.log_mass == kNegInf; });

    if (hyps.size() > buffer_.capacity) buffer_.evict_lowest();

    double norm = kNegInf;
    for (const auto& h : hyps) norm = log_add_exp(norm, h.log_mass);
    for (auto& h : hyps) h.log_mass -= norm;

    std::size_t best = 0;
    std::size_t candidate = hyps.size();
    double fresh_mass = 0.0;
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      // Strict comparisons keep ties on the smaller start index, the longer run.
      if (i > 0 && hyps[i].log_mass > hyps[best].log_mass) best = i;
      if (hyps[i].start_index > fence_) {
        fresh_mass += std::exp(hyps[i].log_mass);
        if (candidate == hyps.size() || hyps[i].log_mass > hyps[candidate].log_mass) candidate = i;
      }
    }
    out.map_run_length = t - hyps[best].start_index;
    out.map_posterior = std::exp(hyps[best].log_mass);

    if (fresh_mass <= 1.0 - cfg_.min_posterior) last_quiet_ = t;

    // Declare when the leading fresh run has survived the dwell window and
    // either condensed the posterior onto itself, or fresh runs jointly took
    // a posterior that was quiet moments ago (so near-tied neighbor starts
    // cannot mask a real change, while a posterior that fragmented slowly
    // under model misfit stays silent). The fence then moves to the detection
    // time so a later re-shuffle of the same change cannot fire again.
    if (candidate != hyps.size() && t - hyps[candidate].start_index >= cfg_.confirmation) {
      const double own = std::exp(hyps[candidate].log_mass);
      const bool condensed = own >= cfg_.min_posterior;
      const bool fresh_takeover = fresh_mass >= cfg_.min_posterior &&
                                  own >= 0.25 * cfg_.min_posterior &&
                                  t - last_quiet_ <= 2 * cfg_.confirmation;
      if (condensed || fresh_takeover) {
        const std::uint64_t location = hyps[candidate].start_index;
        out.event = ChangepointEvent{t, location, own, t - location};
        fence_ = t;
        last_reported_ = location;
      }
    }

    ++t_;
    return out;
  }

  /// Run length and normalized mass of the posterior mode. Ties go to the
  /// longer run so a stale tie cannot look like a fresh change.
  std::pair<std::uint64_t, double> map_run_length() const {
    if (buffer_.empty()) throw std::logic_error("map_run_length on an empty buffer");
    const auto& hyps = buffer_.hypotheses;
    std::size_t best = 0;
    double norm = hyps[0].log_mass;
    for (std::size_t i = 1; i < hyps.size(); ++i) {
      norm = log_add_exp(norm, hyps[i].log_mass);
      if (hyps[i].log_mass > hyps[best].log_mass) best = i;
    }
    return {(t_ - 1) - hyps[best].start_index, std::exp(hyps[best].log_mass - norm)};
  }

  /// Log density of x under the posterior-weighted mixture of run models.
  /// Usable as an anomaly score; does not touch the state.
  double marginal_predictive_logpdf(const Observation& x) const {
    if (buffer_.empty()) throw std::logic_error("marginal_predictive_logpdf on an empty buffer");
    validate_observation(*prior_, x);
    double norm = kNegInf;
    double mix = kNegInf;
    for (const auto& h : buffer_.hypotheses) {
      norm = log_add_exp(norm, h.log_mass);
      mix = log_add_exp(mix, h.log_mass + predictive_logpdf(h.model, x));
    }
    return mix - norm;
  }

  /// (start index, normalized mass) pairs, start index ascending.
  std::vector<std::pair<std::uint64_t, double>> run_length_posterior() const {
    std::vector<std::pair<std::uint64_t, double>> out;
    out.reserve(buffer_.size());
    const auto masses = buffer_.normalized_masses();
    for (std::size_t i = 0; i < masses.size(); ++i)
      out.emplace_back(buffer_.hypotheses[i].start_index, masses[i]);
    return out;
  }

  const RunLengthBuffer<Model>& buffer() const { return buffer_; }
  const DetectorConfig& config() const { return cfg_; }
  std::uint64_t observations_seen() const { return t_; }
  std::uint64_t last_reported_location() const { return last_reported_; }
  std::uint64_t report_fence() const { return fence_; }
  std::uint64_t last_quiet_step() const { return last_quiet_; }
  bool warmed_up() const { return prior_.has_value(); }
  const Model& prior() const {
    if (!prior_.has_value()) throw std::logic_error("prior requested before warmup finished");
    return *prior_;
  }
  std::span<const Observation> pending_warmup() const { return warmup_; }

  /// Rebuilds a detector from snapshot fields. Used by the snapshot codec.
  struct Parts {
    DetectorConfig config;
    std::optional<Model> prior;
    std::vector<Observation> pending_warmup;
    std::uint64_t observations_seen = 0;
    std::uint64_t last_reported = 0;
    std::uint64_t fence = 0;
    std::uint64_t last_quiet = 0;
    std::vector<RunLengthHypothesis<Model>> hypotheses;
  };

  static Detector from_parts(Parts parts) {
    Detector d(parts);
    return d;
  }

 private:
  explicit Detector(Parts& parts) : cfg_(parts.config), prior_(std::move(parts.prior)) {
    cfg_.validate();
    if (prior_.has_value()) prior_->validate();
    init_hazard();
    buffer_.capacity = cfg_.budget;
    buffer_.hypotheses = std::move(parts.hypotheses);
    warmup_ = std::move(parts.pending_warmup);
    t_ = parts.observations_seen;
    last_reported_ = parts.last_reported;
    fence_ = parts.fence;
    last_quiet_ = parts.last_quiet;
    if (buffer_.size() > buffer_.capacity) throw ConfigError("snapshot exceeds the buffer budget");
  }

  void init_hazard() {
    const double h = HazardSpec{cfg_.lambda}.value();
    log_hazard_ = std::log(h);
    log_growth_ = h < 1.0 ? std::log1p(-h) : kNegInf;
  }

  StepResult warmup_step(const Observation& x) {
    if constexpr (std::is_same_v<Observation, double>) {
      if (!std::isfinite(x)) throw InputError("observation must be finite");
    } else {
      if (x.size() == 0 || !x.allFinite()) throw InputError("observation must be finite and non-empty");
      if (!warmup_.empty() && x.size() != warmup_.front().size())
        throw InputError("observation dimension mismatch");
    }
    warmup_.push_back(x);
    if (warmup_.size() >= cfg_.tune.warmup_size) {
      prior_ = autotune(std::span<const Observation>(warmup_), cfg_.tune);
      warmup_.clear();
      warmup_.shrink_to_fit();
    }
    ++t_;
    return {};
  }

  DetectorConfig cfg_;
  std::optional<Model> prior_;
  RunLengthBuffer<Model> buffer_;
  std::vector<Observation> warmup_;
  std::uint64_t t_ = 0;
  std::uint64_t last_reported_ = 0;
  std::uint64_t fence_ = 0;  // run starts at or before this index are settled
  std::uint64_t last_quiet_ = 0;  // last step where fresh runs held almost no mass
  double log_hazard_ = 0.0;
  double log_growth_ = 0.0;
  std::vector<double> preds_;  // scratch, not state
};

using UnivariateDetector = Detector<NormalGammaParams>;
using MultivariateDetector = Detector<MvNormalGammaParams>;

}  // namespace streamcpd
