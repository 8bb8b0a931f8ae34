// End-to-end acceptance suite. Each numbered check prints one PASS/FAIL line;
// the process exits non-zero if any check fails. Streams are generated with
// fixed seeds so every run is reproducible. --full scales the long streams up
// tenfold.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "../reference_bocpd.hpp"
#include "streamcpd/cusum.hpp"
#include "streamcpd/datagen.hpp"
#include "streamcpd/detector.hpp"
#include "streamcpd/metrics.hpp"
#include "streamcpd/rng.hpp"

using namespace streamcpd;

namespace {

int failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
  std::printf("[%s] %-4s %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

std::vector<std::uint64_t> detect(const StreamWithTruth& s, const DetectorConfig& cfg,
                                  bool log_transform = false) {
  UnivariateDetector d(cfg);
  std::vector<std::uint64_t> locations;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double x = s.scalar(i);
    if (log_transform) x = std::log(x);
    const auto r = d.step(x);
    if (r.event) locations.push_back(r.event->location);
  }
  return locations;
}

std::vector<std::uint64_t> detect_mv(const StreamWithTruth& s, const DetectorConfig& cfg) {
  MultivariateDetector d(cfg);
  std::vector<std::uint64_t> locations;
  for (std::size_t i = 0; i < s.size(); ++i) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(s.dim));
    for (std::size_t c = 0; c < s.dim; ++c) x(static_cast<Eigen::Index>(c)) = s.row(i)[c];
    const auto r = d.step(x);
    if (r.event) locations.push_back(r.event->location);
  }
  return locations;
}

double mae_of(const StreamWithTruth& s, const std::vector<std::uint64_t>& locs,
              PenaltyRule rule = PenaltyRule::UnmatchedOnly) {
  return mae_with_penalty(s.truth, locs, s.size(), rule).loss;
}

DetectorConfig exact_config() {
  DetectorConfig cfg;
  cfg.score_clip = 0.0;  // exact predictive scoring, the reference recursion
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  bool full = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--full") == 0) full = true;
  const std::size_t scale = full ? 1000000 : 100000;
  const std::size_t period = 10000;  // regimes stay 10k points at either scale
  const DetectorConfig defaults;

  // 1. Gaussian switch stream: every boundary recovered exactly, both penalty
  // rules, within the time budget.
  {
    const auto s = suite::normal_switch(scale, period, 55);
    const auto t0 = std::chrono::steady_clock::now();
    const auto locs = detect(s, defaults);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double plain = mae_of(s, locs);
    const double literal = mae_of(s, locs, PenaltyRule::Literal);
    report("01", plain == 0.0 && literal == 0.0 && secs <= 30.0,
           fmt("gaussian switch %zu pts: mae=%.0f literal=%.0f runtime=%.2fs", s.size(), plain,
               literal, secs));
  }

  // 2. Gaussian/uniform alternation.
  {
    const auto s = suite::normal_uniform(scale, period, 10);
    const auto locs = detect(s, defaults);
    const double plain = mae_of(s, locs);
    const double literal = mae_of(s, locs, PenaltyRule::Literal);
    report("02", plain == 0.0 && literal == 0.0,
           fmt("gaussian/uniform alternation: mae=%.0f literal=%.0f", plain, literal));
  }

  // 3. Non-Gaussian streams under the Gaussian model.
  {
    const auto s = suite::poisson_alternating(10000, 10, 9);
    const double m = mae_of(s, detect(s, exact_config()));
    report("03a", m == 0.0, fmt("poisson rate switch: mae=%.0f", m));
  }
  {
    const auto s = suite::gamma_alternating(10000, 10, 42);
    const double m = mae_of(s, detect(s, exact_config()));
    report("03b", m == 0.0, fmt("gamma switch: mae=%.0f", m));
  }
  {
    const auto s = suite::mixed_gaussian(10000, 10, 19);
    const double m = mae_of(s, detect(s, exact_config()));
    report("03c", m == 0.0, fmt("gaussian mixture switch: mae=%.0f", m));
  }
  {
    const auto s = suite::lognormal_alternating(10000, 10, 1);
    const double with_log = mae_of(s, detect(s, defaults, true));
    const double raw = mae_of(s, detect(s, defaults));
    report("03d", with_log == 0.0 && raw > 0.0,
           fmt("lognormal: log-transformed mae=%.0f, raw mae=%.0f", with_log, raw));
  }

  // 4. Outlier robustness grid against the control-chart baseline.
  {
    const auto base = suite::normal_switch(scale, period, 55);
    bool bocpd_all_zero = true;
    bool cusum_all_positive = true;
    std::string detail = "bocpd mae per level:";
    for (double fraction : {0.001, 0.005, 0.01, 0.10}) {
      const auto s = inject_outliers(base, fraction, 8.0, 9);
      const double bocpd = mae_of(s, detect(s, defaults));
      detail += fmt(" %g%%=%.0f", fraction * 100, bocpd);
      if (bocpd != 0.0) bocpd_all_zero = false;

      CusumDetector cd{CusumConfig{}};
      std::vector<std::uint64_t> alarms;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (const auto a = cd.step(s.scalar(i))) alarms.push_back(*a);
      if (mae_of(s, alarms) <= 0.0) cusum_all_positive = false;
    }
    report("04", bocpd_all_zero && cusum_all_positive,
           detail + (cusum_all_positive ? " (cusum > 0 at every level)" : " (cusum hit zero)"));
  }

  // 5. Two-dimensional drifts: mean, variance, covariance-only.
  {
    const auto s = suite::mv_mean_drift(2);
    const double m = mae_of(s, detect_mv(s, defaults));
    report("05a", m == 0.0, fmt("2d mean shift: mae=%.0f", m));
  }
  {
    const auto s = suite::mv_variance_drift(2);
    const double m = mae_of(s, detect_mv(s, exact_config()));
    report("05b", m == 0.0, fmt("2d variance shift: mae=%.0f", m));
  }
  {
    // Correlation-only drift carries ~0.05 nats per point, so the detector
    // gets a roomy buffer, a heavy slow-drift prior and a long dwell.
    DetectorConfig cfg = exact_config();
    cfg.budget = 2048;
    cfg.confirmation = 300;
    cfg.min_posterior = 0.5;
    cfg.tune.alpha0 = 1.5;
    cfg.tune.kappa0 = 2.0;
    const auto s = suite::mv_covariance_drift(3);
    const auto locs = detect_mv(s, cfg);
    const bool one = locs.size() == 1;
    const bool near = one && locs[0] >= 950 && locs[0] <= 1050;
    std::string detail = "correlation-only drift events:";
    for (auto l : locs) detail += fmt(" @%llu", (unsigned long long)l);
    if (locs.empty()) detail += " none";
    report("05c", one && near, detail);
  }

  // 6/7. Budget and warmup sweeps leave the result untouched.
  {
    const auto s = suite::normal_switch(scale, period, 55);
    bool identical = true;
    double first = -1.0;
    std::string detail = "budget sweep mae:";
    for (std::size_t budget : {10u, 20u, 50u, 100u}) {
      DetectorConfig cfg = defaults;
      cfg.budget = budget;
      const double m = mae_of(s, detect(s, cfg));
      detail += fmt(" L%zu=%.0f", budget, m);
      if (first < 0.0) first = m;
      if (m != first) identical = false;
    }
    report("06", identical, detail);

    identical = true;
    first = -1.0;
    detail = "warmup sweep mae:";
    for (std::size_t warmup : {5u, 10u, 20u, 50u}) {
      DetectorConfig cfg = defaults;
      cfg.tune.warmup_size = warmup;
      const double m = mae_of(s, detect(s, cfg));
      detail += fmt(" W%zu=%.0f", warmup, m);
      if (first < 0.0) first = m;
      if (m != first) identical = false;
    }
    report("07", identical, detail);
  }

  // 8. The bounded engine with a roomy budget reproduces the unbounded
  // reference recursion, stream by stream, point by point.
  {
    const NormalGammaParams prior{2.0, 1.0, 1.0, 0.0};
    double worst = 0.0;
    Rng rng(991);
    for (int round = 0; round < 200; ++round) {
      std::vector<double> xs;
      const std::size_t half = 250;
      const double jump = rng.uniform(3.0, 12.0);
      for (std::size_t i = 0; i < half; ++i) xs.push_back(rng.normal());
      for (std::size_t i = 0; i < half; ++i) xs.push_back(jump + rng.normal());

      const auto expected = refbocpd::run(xs, 200.0, {prior.alpha, prior.beta, prior.kappa, prior.mu});
      DetectorConfig cfg;
      cfg.lambda = 200.0;
      cfg.budget = 512;
      cfg.autotune = false;
      cfg.score_clip = 0.0;
      UnivariateDetector d(cfg, prior);
      for (std::size_t t = 0; t < xs.size(); ++t) {
        d.step(xs[t]);
        const auto posterior = d.run_length_posterior();
        for (std::size_t i = 0; i < posterior.size(); ++i)
          worst = std::max(worst, std::abs(posterior[i].second - expected.posterior[t][i]));
      }
    }
    report("08", worst <= 1e-9, fmt("200 streams vs unbounded reference: max |diff| = %.2e", worst));
  }

  // 9. A one-dimensional multivariate detector matches the scalar detector.
  {
    const auto s = suite::normal_switch(10000, 2500, 5);
    UnivariateDetector uni(defaults);
    MultivariateDetector multi(defaults);
    double worst = 0.0;
    bool events_match = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto ru = uni.step(s.scalar(i));
      Eigen::VectorXd x(1);
      x << s.scalar(i);
      const auto rm = multi.step(x);
      if (ru.event.has_value() != rm.event.has_value()) events_match = false;
      if (ru.event && rm.event && ru.event->location != rm.event->location) events_match = false;
      if (!ru.scored) continue;
      const auto pu = uni.run_length_posterior();
      const auto pm = multi.run_length_posterior();
      if (pu.size() != pm.size()) {
        events_match = false;
        break;
      }
      for (std::size_t k = 0; k < pu.size(); ++k)
        worst = std::max(worst, std::abs(pu[k].second - pm[k].second));
    }
    report("09", events_match && worst <= 1e-9,
           fmt("scalar vs 1-d engine over 10k pts: max |diff| = %.2e", worst));
  }

  // 10. Constant per-point cost: the last tenth of a million-point stream is
  // no slower than the first tenth, and the buffer never exceeds its budget.
  {
    const auto s = suite::normal_switch(1000000, 10000, 31);
    UnivariateDetector d(defaults);
    const std::size_t n = s.size();
    const std::size_t decile = n / 10;
    std::size_t max_buffer = 0;
    bool masses_finite = true;
    const auto check = [&](std::size_t i) {
      max_buffer = std::max(max_buffer, d.buffer().size());
      if (i % 10000 == 0) {
        for (const auto& h : d.buffer().hypotheses)
          if (!std::isfinite(h.log_mass)) masses_finite = false;
      }
    };
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < decile; ++i) {
      d.step(s.scalar(i));
      check(i);
    }
    const auto t1 = std::chrono::steady_clock::now();
    for (std::size_t i = decile; i < n - decile; ++i) {
      d.step(s.scalar(i));
      check(i);
    }
    const auto t2 = std::chrono::steady_clock::now();
    for (std::size_t i = n - decile; i < n; ++i) {
      d.step(s.scalar(i));
      check(i);
    }
    const auto t3 = std::chrono::steady_clock::now();
    for (const auto& h : d.buffer().hypotheses)
      if (!std::isfinite(h.log_mass)) masses_finite = false;
    const double first = std::chrono::duration<double>(t1 - t0).count();
    const double last = std::chrono::duration<double>(t3 - t2).count();
    const double total = std::chrono::duration<double>(t3 - t0).count();
    report("10", last <= 1.5 * first && max_buffer <= defaults.budget && masses_finite,
           fmt("1M pts in %.1fs: first decile %.3fs, last %.3fs (x%.2f), max buffer %zu, "
               "masses finite %d",
               total, first, last, last / first, max_buffer, masses_finite));
  }

  // 11. Hyperparameter sensitivity: widely mis-scaled fixed hyperparameters
  // must not report fewer events than the self-tuned detector, which stays
  // quiet on a drift-free stream.
  {
    const auto s = suite::constant_normal(10000, 1e4, 100.0, 42);
    DetectorConfig fixed = defaults;
    fixed.autotune = false;
    UnivariateDetector df(fixed, NormalGammaParams{0.1, 0.01, 1.0, 0.0});
    std::size_t fixed_events = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (df.step(s.scalar(i)).event) ++fixed_events;
    const std::size_t tuned_events = detect(s, defaults).size();
    report("11", fixed_events >= 5 * tuned_events && tuned_events <= 1,
           fmt("drift-free stream events: fixed hyperparameters=%zu, autotuned=%zu", fixed_events,
               tuned_events));
  }

  // 12. Burn-in sensitivity of the control chart versus the tuning-free engine.
  {
    const auto s = suite::normal_switch(10000, 1000, 42);
    double lo = 1e300, hi = 0.0;
    std::string detail = "cusum mae:";
    for (std::size_t burn : {5u, 100u, 1000u}) {
      CusumDetector cd(CusumConfig{burn, 0.5, 4.0});
      std::vector<std::uint64_t> alarms;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (const auto a = cd.step(s.scalar(i))) alarms.push_back(*a);
      const double m = mae_of(s, alarms);
      detail += fmt(" burn%zu=%.0f", burn, m);
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    const double engine = mae_of(s, detect(s, defaults));
    detail += fmt(" | engine=%.0f", engine);
    report("12", hi >= 10.0 * lo && engine <= lo, detail);
  }

  // 13. Metric unit checks.
  {
    const bool a = mae_with_penalty({10}, {10}, 100).loss == 0.0;
    const bool b = mae_with_penalty({10, 20}, {12}, 100).loss == 102.0;
    const bool c = mae_with_penalty({10}, {12, 90}, 100).loss == 92.0;
    const bool shuffled =
        mae_with_penalty({80, 10, 40}, {41, 11, 79}, 200).loss ==
        mae_with_penalty({10, 40, 80}, {11, 41, 79}, 200).loss;
    const std::vector<std::uint64_t> truth{100, 300, 700};
    const bool drop_one = mae_with_penalty(truth, {100, 300}, 1000).loss == 1000.0;
    report("13", a && b && c && shuffled && drop_one,
           fmt("metric checks: exact=%d miss=%d surplus=%d order=%d drop-one=%d", a, b, c, shuffled,
               drop_one));
  }

  std::printf("%s: %d failure%s\n", failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
              failures, failures == 1 ? "" : "s");
  return failures == 0 ? 0 : 1;
}
