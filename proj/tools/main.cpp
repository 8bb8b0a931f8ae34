#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "streamcpd/cusum.hpp"
#include "streamcpd/datagen.hpp"
#include "streamcpd/detector.hpp"
#include "streamcpd/ewma.hpp"
#include "streamcpd/io.hpp"
#include "streamcpd/keyed.hpp"
#include "streamcpd/metrics.hpp"
#include "streamcpd/snapshot.hpp"

using namespace streamcpd;

namespace {

struct GenArgs {
  std::string kind = "normal-switch";
  std::size_t n = 100000;
  std::size_t period = 10000;
  std::size_t changepoints = 10;
  std::uint64_t seed = 42;
  std::string out;
  double outlier_fraction = 0.0;
  double outlier_magnitude = 8.0;
};

StreamWithTruth build_stream(const GenArgs& args) {
  StreamWithTruth stream;
  if (args.kind == "normal-switch")
    stream = suite::normal_switch(args.n, args.period, args.seed);
  else if (args.kind == "normal-uniform")
    stream = suite::normal_uniform(args.n, args.period, args.seed);
  else if (args.kind == "poisson")
    stream = suite::poisson_alternating(args.n, args.changepoints, args.seed);
  else if (args.kind == "gamma")
    stream = suite::gamma_alternating(args.n, args.changepoints, args.seed);
  else if (args.kind == "lognormal")
    stream = suite::lognormal_alternating(args.n, args.changepoints, args.seed);
  else if (args.kind == "mixed-gaussian")
    stream = suite::mixed_gaussian(args.n, args.changepoints, args.seed);
  else if (args.kind == "mean-drift")
    stream = suite::mv_mean_drift(args.seed);
  else if (args.kind == "var-drift")
    stream = suite::mv_variance_drift(args.seed);
  else if (args.kind == "cov-drift")
    stream = suite::mv_covariance_drift(args.seed);
  else if (args.kind == "constant")
    stream = suite::constant_normal(args.n, 0.0, 1.0, args.seed);
  else
    throw ConfigError("unknown stream kind: " + args.kind);
  if (args.outlier_fraction > 0.0)
    stream = inject_outliers(stream, args.outlier_fraction, args.outlier_magnitude, args.seed + 1);
  return stream;
}

void write_stream_files(const StreamWithTruth& stream, const std::string& out) {
  std::ofstream data(out);
  if (!data) throw ConfigError("cannot open output file: " + out);
  write_stream_csv(stream, data);
  std::ofstream truth(out + ".truth");
  if (!truth) throw ConfigError("cannot open truth file: " + out + ".truth");
  write_truth(stream.truth, truth);
}

int run_gen(const GenArgs& args) {
  const auto stream = build_stream(args);
  write_stream_files(stream, args.out);
  std::cerr << "wrote " << stream.size() << " rows (" << stream.dim << " column"
            << (stream.dim > 1 ? "s" : "") << ") to " << args.out << ", " << stream.truth.size()
            << " changepoints to " << args.out << ".truth\n";
  return 0;
}

struct DetectArgs {
  std::string input;
  std::string format = "auto";  // auto | csv | ndjson
  std::string algorithm = "bocpd";
  double lambda = 250.0;
  std::size_t budget = 50;
  std::size_t warmup = 20;
  std::uint64_t confirmation = 60;
  double min_posterior = 0.85;
  double score_clip = 5.0;
  bool no_autotune = false;
  double alpha0 = 50.0;
  double kappa0 = 1.0;
  double beta0 = 0.01;
  double mu0 = 0.0;
  bool fixed_alpha = false, fixed_beta = false, fixed_kappa = false, fixed_mu = false;
  std::string transform = "none";
  std::string key_column;
  std::vector<std::string> columns;
  std::string events_path;
  std::string summary_path;
  std::string plot_path;
  std::string snapshot_in;
  std::string snapshot_out;
  std::size_t workers = 1;
  std::size_t burn_in = 1000;
  double drift = 0.5;
  double threshold = 4.0;
  double weight = 0.1;
  double limit = 3.0;
};

DetectorConfig make_detector_config(const DetectArgs& args) {
  DetectorConfig cfg;
  cfg.lambda = args.lambda;
  cfg.budget = args.budget;
  cfg.confirmation = args.confirmation;
  cfg.min_posterior = args.min_posterior;
  cfg.score_clip = args.score_clip;
  cfg.autotune = !args.no_autotune;
  cfg.tune.warmup_size = args.warmup;
  cfg.tune.alpha0 = args.alpha0;
  cfg.tune.kappa0 = args.kappa0;
  return cfg;
}

std::shared_ptr<const KeyStreamFactory> make_factory(const DetectArgs& args, std::size_t dim) {
  if (args.algorithm == "bocpd") {
    DetectorConfig cfg = make_detector_config(args);
    if (!cfg.autotune) {
      // Fixed hyperparameters; flag defaults follow the common cold-start choice.
      if (dim == 1) {
        NormalGammaParams prior{args.fixed_alpha ? args.alpha0 : 0.1,
                                args.fixed_beta ? args.beta0 : 0.01,
                                args.fixed_kappa ? args.kappa0 : 1.0,
                                args.fixed_mu ? args.mu0 : 0.0};
        return make_bocpd_univariate_factory(cfg, prior);
      }
      MvNormalGammaParams prior;
      prior.alpha = std::max(args.fixed_alpha ? args.alpha0 : 0.1,
                             (static_cast<double>(dim) + 1.0) / 2.0);
      prior.kappa = args.fixed_kappa ? args.kappa0 : 1.0;
      prior.mu = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim),
                                           args.fixed_mu ? args.mu0 : 0.0);
      prior.beta = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim),
                                             static_cast<Eigen::Index>(dim)) *
                   (args.fixed_beta ? args.beta0 : 0.01);
      return make_bocpd_multivariate_factory(cfg, prior);
    }
    if (dim == 1) return make_bocpd_univariate_factory(cfg);
    return make_bocpd_multivariate_factory(cfg);
  }
  if (args.algorithm == "cusum") {
    if (dim != 1) throw ConfigError("cusum handles univariate streams only");
    return make_cusum_factory(CusumConfig{args.burn_in, args.drift, args.threshold});
  }
  if (args.algorithm == "ewma") {
    if (dim != 1) throw ConfigError("ewma handles univariate streams only");
    return make_ewma_factory(EwmaConfig{args.burn_in, args.weight, args.limit});
  }
  throw ConfigError("unknown algorithm: " + args.algorithm);
}

nlohmann::json event_to_json(const KeyedEvent& e, bool keyed) {
  nlohmann::json record;
  record["t"] = e.event.t;
  record["location"] = e.event.location;
  if (e.event.run_length) record["map_run_length"] = *e.event.run_length;
  else record["map_run_length"] = nullptr;
  if (e.event.posterior) record["map_posterior"] = *e.event.posterior;
  else record["map_posterior"] = nullptr;
  if (keyed) record["key"] = e.key;
  return record;
}

int run_detect(const DetectArgs& args) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (!args.input.empty() && args.input != "-") {
    file.open(args.input);
    if (!file) throw ConfigError("cannot open input: " + args.input);
    in = &file;
  }

  std::string format = args.format;
  if (format == "auto") {
    format = "csv";
    if (args.input.size() >= 7 && args.input.substr(args.input.size() - 7) == ".ndjson")
      format = "ndjson";
    if (args.input.size() >= 6 && args.input.substr(args.input.size() - 6) == ".jsonl")
      format = "ndjson";
  }

  ReaderOptions reader_options;
  reader_options.key_column = args.key_column;
  reader_options.value_columns = args.columns;
  auto reader = format == "ndjson" ? make_ndjson_reader(*in, reader_options)
                                   : make_csv_reader(*in, reader_options);

  if ((!args.snapshot_in.empty() || !args.snapshot_out.empty()) && args.algorithm != "bocpd")
    throw ConfigError("snapshots require the bocpd algorithm");

  std::map<std::string, std::string> snapshots;
  if (!args.snapshot_in.empty()) {
    std::ifstream snap(args.snapshot_in);
    if (!snap) throw ConfigError("cannot open snapshot: " + args.snapshot_in);
    const auto payload = nlohmann::json::parse(snap, nullptr, false);
    if (payload.is_discarded() || payload.value("format", "") != "streamcpd-keyed-snapshot")
      throw InputError("not a keyed snapshot file");
    for (const auto& [key, state] : payload.at("detectors").items())
      snapshots[key] = state.dump();
  }

  KeyedOptions options;
  options.workers = args.workers;
  options.log_transform = args.transform == "log";
  options.keep_point_traces = !args.plot_path.empty();

  Row row;
  std::unique_ptr<KeyedRunner> runner;
  std::size_t dim = 0;
  while (reader->next(row)) {
    if (!runner) {
      dim = row.values.size();
      runner = std::make_unique<KeyedRunner>(make_factory(args, dim), options, snapshots);
    }
    runner->push(row.key, row.values);
  }

  KeyedResult result;
  if (runner) result = runner->finish(!args.snapshot_out.empty());
  result.summary.skipped += reader->malformed();

  const bool keyed = !args.key_column.empty();
  {
    std::ofstream events_file;
    std::ostream* events_out = &std::cout;
    if (!args.events_path.empty()) {
      events_file.open(args.events_path);
      if (!events_file) throw ConfigError("cannot open events output: " + args.events_path);
      events_out = &events_file;
    }
    for (const auto& e : result.events) *events_out << event_to_json(e, keyed).dump() << '\n';
  }

  if (!args.plot_path.empty()) {
    std::ofstream plot(args.plot_path);
    if (!plot) throw ConfigError("cannot open plot output: " + args.plot_path);
    plot << (keyed ? "key,t,map_run_length,map_posterior,marginal_logpdf\n"
                   : "t,map_run_length,map_posterior,marginal_logpdf\n");
    plot.precision(12);
    for (const auto& tr : result.traces) {
      if (keyed) plot << tr.key << ',';
      plot << tr.t << ',';
      if (tr.trace.map_run_length) plot << *tr.trace.map_run_length;
      plot << ',';
      if (tr.trace.map_posterior) plot << *tr.trace.map_posterior;
      plot << ',';
      if (tr.trace.marginal_logpdf) plot << *tr.trace.marginal_logpdf;
      plot << '\n';
    }
  }

  if (!args.snapshot_out.empty()) {
    nlohmann::json payload;
    payload["format"] = "streamcpd-keyed-snapshot";
    payload["version"] = 1;
    payload["algorithm"] = args.algorithm;
    nlohmann::json detectors = nlohmann::json::object();
    for (const auto& [key, state] : result.snapshots) detectors[key] = nlohmann::json::parse(state);
    payload["detectors"] = std::move(detectors);
    std::ofstream snap(args.snapshot_out);
    if (!snap) throw ConfigError("cannot open snapshot output: " + args.snapshot_out);
    snap << payload.dump(2) << '\n';
  }

  nlohmann::json summary;
  summary["rows"] = result.summary.rows;
  summary["skipped"] = result.summary.skipped;
  summary["keys"] = result.summary.events_per_key.size();
  summary["events"] = result.events.size();
  summary["seconds"] = result.summary.seconds;
  summary["points_per_second"] = result.summary.points_per_second;
  nlohmann::json per_key = nlohmann::json::object();
  for (const auto& [key, count] : result.summary.events_per_key)
    per_key[key.empty() ? "" : key] = count;
  summary["events_per_key"] = std::move(per_key);
  if (!args.summary_path.empty()) {
    std::ofstream s(args.summary_path);
    if (!s) throw ConfigError("cannot open summary output: " + args.summary_path);
    s << summary.dump(2) << '\n';
  } else {
    std::cerr << summary.dump(2) << '\n';
  }
  return 0;
}

struct BenchArgs {
  std::string out = "bench.csv";
  std::uint64_t seed = 55;
  std::size_t points = 100000;
  std::size_t period = 10000;
};

struct BenchRow {
  std::string table, dataset, algorithm, config;
  std::size_t n = 0, actual = 0, predicted = 0;
  double loss = 0.0, loss_literal = 0.0, runtime_s = 0.0, points_per_s = 0.0;
};

class Bench {
 public:
  explicit Bench(const BenchArgs& args) : args_(args) {}

  void run(std::ostream& out) {
    table1();
    table2();
    table5();
    table6();
    table7();
    sweeps();
    out << "table,dataset,algorithm,config,n,actual,predicted,loss,loss_literal,runtime_s,points_per_s\n";
    out.precision(10);
    for (const auto& r : rows_) {
      out << r.table << ',' << r.dataset << ',' << r.algorithm << ',' << r.config << ',' << r.n << ','
          << r.actual << ',' << r.predicted << ',' << r.loss << ',' << r.loss_literal << ','
          << r.runtime_s << ',' << r.points_per_s << '\n';
    }
  }

 private:
  template <class Detect>
  void record(const char* table, const std::string& dataset, const char* algorithm,
              const std::string& config, const StreamWithTruth& s, Detect&& detect) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::uint64_t> locs = detect(s);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    BenchRow row;
    row.table = table;
    row.dataset = dataset;
    row.algorithm = algorithm;
    row.config = config;
    row.n = s.size();
    row.actual = s.truth.size();
    row.predicted = locs.size();
    row.loss = mae_with_penalty(s.truth, locs, s.size()).loss;
    row.loss_literal = mae_with_penalty(s.truth, locs, s.size(), PenaltyRule::Literal).loss;
    row.runtime_s = secs;
    row.points_per_s = secs > 0 ? static_cast<double>(s.size()) / secs : 0.0;
    rows_.push_back(std::move(row));
    std::cerr << row.table << '/' << row.dataset << '/' << row.algorithm << ": loss=" << row.loss
              << " (" << row.runtime_s << "s)\n";
  }

  static std::vector<std::uint64_t> bocpd(const StreamWithTruth& s, DetectorConfig cfg,
                                          bool log_transform = false) {
    UnivariateDetector d(cfg);
    std::vector<std::uint64_t> locs;
    for (std::size_t i = 0; i < s.size(); ++i) {
      double x = s.scalar(i);
      if (log_transform) x = std::log(x);
      const auto r = d.step(x);
      if (r.event) locs.push_back(r.event->location);
    }
    return locs;
  }

  static std::vector<std::uint64_t> bocpd_mv(const StreamWithTruth& s, DetectorConfig cfg) {
    MultivariateDetector d(cfg);
    std::vector<std::uint64_t> locs;
    for (std::size_t i = 0; i < s.size(); ++i) {
      Eigen::VectorXd x(static_cast<Eigen::Index>(s.dim));
      for (std::size_t c = 0; c < s.dim; ++c) x(static_cast<Eigen::Index>(c)) = s.row(i)[c];
      const auto r = d.step(x);
      if (r.event) locs.push_back(r.event->location);
    }
    return locs;
  }

  static std::vector<std::uint64_t> cusum(const StreamWithTruth& s, CusumConfig cfg) {
    CusumDetector d(cfg);
    std::vector<std::uint64_t> locs;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (const auto a = d.step(s.scalar(i))) locs.push_back(*a);
    return locs;
  }

  static std::vector<std::uint64_t> ewma(const StreamWithTruth& s, EwmaConfig cfg) {
    EwmaDetector d(cfg);
    std::vector<std::uint64_t> locs;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (const auto a = d.step(s.scalar(i))) locs.push_back(*a);
    return locs;
  }

  void univariate_trio(const char* table, const std::string& dataset, const StreamWithTruth& s,
                       bool log_transform = false) {
    const DetectorConfig defaults;
    record(table, dataset, "bocpd", "defaults", s,
           [&](const StreamWithTruth& stream) { return bocpd(stream, defaults, log_transform); });
    record(table, dataset, "cusum", "burn=1000", s,
           [&](const StreamWithTruth& stream) { return cusum(stream, CusumConfig{}); });
    record(table, dataset, "ewma", "burn=1000", s,
           [&](const StreamWithTruth& stream) { return ewma(stream, EwmaConfig{}); });
  }

  void table1() {
    univariate_trio("table1", "normal", suite::normal_switch(args_.points, args_.period, args_.seed));
    univariate_trio("table1", "normal-uniform",
                    suite::normal_uniform(args_.points, args_.period, args_.seed));
  }

  void table2() {
    const DetectorConfig defaults;
    record("table2", "mean-change", "bocpd", "defaults", suite::mv_mean_drift(args_.seed),
           [&](const StreamWithTruth& s) { return bocpd_mv(s, defaults); });
    record("table2", "variance-change", "bocpd", "exact-scoring", suite::mv_variance_drift(args_.seed),
           [&](const StreamWithTruth& s) {
             DetectorConfig cfg;
             cfg.score_clip = 0.0;
             return bocpd_mv(s, cfg);
           });
    record("table2", "covariance-change", "bocpd", "slow-drift", suite::mv_covariance_drift(args_.seed),
           [&](const StreamWithTruth& s) {
             DetectorConfig cfg;
             cfg.score_clip = 0.0;
             cfg.budget = 2048;
             cfg.confirmation = 300;
             cfg.min_posterior = 0.5;
             cfg.tune.alpha0 = 1.5;
             cfg.tune.kappa0 = 2.0;
             return bocpd_mv(s, cfg);
           });
  }

  void table5() {
    const auto s = suite::normal_switch(10000, 1000, args_.seed);
    for (std::size_t burn : {5u, 20u, 100u, 500u, 1000u}) {
      record("table5", "switch-every-1000", "cusum", "burn=" + std::to_string(burn), s,
             [&](const StreamWithTruth& stream) {
               return cusum(stream, CusumConfig{burn, 0.5, 4.0});
             });
    }
    record("table5", "switch-every-1000", "bocpd", "defaults", s,
           [&](const StreamWithTruth& stream) { return bocpd(stream, DetectorConfig{}); });
  }

  void table6() {
    DetectorConfig exact;
    exact.score_clip = 0.0;
    const auto poisson = suite::poisson_alternating(10000, 10, args_.seed);
    const auto gamma = suite::gamma_alternating(10000, 10, args_.seed);
    const auto lognormal = suite::lognormal_alternating(10000, 10, args_.seed);
    const auto mixed = suite::mixed_gaussian(10000, 10, args_.seed);
    record("table6", "poisson", "bocpd", "exact-scoring", poisson,
           [&](const StreamWithTruth& s) { return bocpd(s, exact); });
    record("table6", "gamma", "bocpd", "exact-scoring", gamma,
           [&](const StreamWithTruth& s) { return bocpd(s, exact); });
    record("table6", "mixed-gaussian", "bocpd", "exact-scoring", mixed,
           [&](const StreamWithTruth& s) { return bocpd(s, exact); });
    record("table6", "lognormal", "bocpd", "defaults", lognormal,
           [&](const StreamWithTruth& s) { return bocpd(s, DetectorConfig{}); });
    record("table6", "lognormal-log", "bocpd", "defaults+log", lognormal,
           [&](const StreamWithTruth& s) { return bocpd(s, DetectorConfig{}, true); });
    const std::pair<const char*, const StreamWithTruth*> baselines[] = {
        {"poisson", &poisson}, {"gamma", &gamma}, {"lognormal", &lognormal}, {"mixed-gaussian", &mixed}};
    for (const auto& [name, stream] : baselines) {
      record("table6", name, "cusum", "burn=1000", *stream,
             [&](const StreamWithTruth& s) { return cusum(s, CusumConfig{}); });
    }
  }

  void table7() {
    const auto base = suite::normal_switch(args_.points, args_.period, args_.seed);
    for (double fraction : {0.001, 0.005, 0.01, 0.10}) {
      const auto s = inject_outliers(base, fraction, 8.0, 9);
      const std::string name = "outliers-" + std::to_string(fraction * 100).substr(0, 4) + "pct";
      record("table7", name, "bocpd", "defaults", s,
             [&](const StreamWithTruth& stream) { return bocpd(stream, DetectorConfig{}); });
      record("table7", name, "cusum", "burn=1000", s,
             [&](const StreamWithTruth& stream) { return cusum(stream, CusumConfig{}); });
    }
  }

  void sweeps() {
    const auto s = suite::normal_switch(args_.points, args_.period, args_.seed);
    for (std::size_t budget : {10u, 20u, 50u, 100u}) {
      DetectorConfig cfg;
      cfg.budget = budget;
      record("fig3", "normal", "bocpd", "budget=" + std::to_string(budget), s,
             [&](const StreamWithTruth& stream) { return bocpd(stream, cfg); });
    }
    for (std::size_t warmup : {5u, 10u, 20u, 50u}) {
      DetectorConfig cfg;
      cfg.tune.warmup_size = warmup;
      record("fig6", "normal", "bocpd", "warmup=" + std::to_string(warmup), s,
             [&](const StreamWithTruth& stream) { return bocpd(stream, cfg); });
    }
  }

  BenchArgs args_;
  std::vector<BenchRow> rows_;
};

int run_bench(const BenchArgs& args) {
  std::ofstream out(args.out);
  if (!out) throw ConfigError("cannot open report output: " + args.out);
  Bench bench(args);
  bench.run(out);
  std::cerr << "report written to " << args.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budget-bounded online changepoint detection for unbounded streams"};
  app.require_subcommand(1);

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic stream with known changepoints");
  gen->set_config("--config", "", "Read options from a key=value file");
  gen->add_option("--kind", gen_args.kind,
                  "normal-switch | normal-uniform | poisson | gamma | lognormal | mixed-gaussian | "
                  "mean-drift | var-drift | cov-drift | constant")
      ->capture_default_str();
  gen->add_option("--n", gen_args.n, "Stream length")->capture_default_str();
  gen->add_option("--period", gen_args.period, "Points per regime (switching kinds)")
      ->capture_default_str();
  gen->add_option("--changepoints", gen_args.changepoints, "Changepoint count (alternating kinds)")
      ->capture_default_str();
  gen->add_option("--seed", gen_args.seed, "Generator seed")->capture_default_str();
  gen->add_option("--out", gen_args.out, "Output CSV path; truth goes to <out>.truth")->required();
  gen->add_option("--outlier-fraction", gen_args.outlier_fraction, "Fraction of rows replaced")
      ->capture_default_str();
  gen->add_option("--outlier-magnitude", gen_args.outlier_magnitude, "Spike size in segment sigmas")
      ->capture_default_str();

  DetectArgs detect_args;
  auto* detect = app.add_subcommand("detect", "Run a detector over a CSV or NDJSON stream");
  detect->set_config("--config", "", "Read options from a key=value file");
  detect->add_option("--input", detect_args.input, "Input path; '-' or empty reads stdin");
  detect->add_option("--format", detect_args.format, "auto | csv | ndjson")->capture_default_str();
  detect->add_option("--algorithm", detect_args.algorithm, "bocpd | cusum | ewma")
      ->capture_default_str();
  detect->add_option("--lambda", detect_args.lambda, "Expected run length")->capture_default_str();
  detect->add_option("--budget", detect_args.budget, "Hypothesis buffer size")->capture_default_str();
  detect->add_option("--warmup", detect_args.warmup, "Warmup samples used for tuning")
      ->capture_default_str();
  detect->add_option("--confirm", detect_args.confirmation, "Dwell before a change is reported")
      ->capture_default_str();
  detect->add_option("--min-posterior", detect_args.min_posterior, "Posterior share to declare")
      ->capture_default_str();
  detect->add_option("--score-clip", detect_args.score_clip,
                     "Residual cap for mass scoring; 0 = exact")
      ->capture_default_str();
  detect->add_flag("--no-autotune", detect_args.no_autotune, "Use fixed hyperparameters");
  detect->add_option("--alpha0", detect_args.alpha0, "Prior shape")
      ->capture_default_str()
      ->each([&](const std::string&) { detect_args.fixed_alpha = true; });
  detect->add_option("--beta0", detect_args.beta0, "Prior scale (fixed mode)")
      ->capture_default_str()
      ->each([&](const std::string&) { detect_args.fixed_beta = true; });
  detect->add_option("--kappa0", detect_args.kappa0, "Prior pseudo-count")
      ->capture_default_str()
      ->each([&](const std::string&) { detect_args.fixed_kappa = true; });
  detect->add_option("--mu0", detect_args.mu0, "Prior location (fixed mode)")
      ->capture_default_str()
      ->each([&](const std::string&) { detect_args.fixed_mu = true; });
  detect->add_option("--transform", detect_args.transform, "none | log")->capture_default_str();
  detect->add_option("--key-column", detect_args.key_column, "Column holding the stream key");
  detect->add_option("--columns", detect_args.columns, "Value columns (default: all non-key)");
  detect->add_option("--events", detect_args.events_path, "Events NDJSON path (default stdout)");
  detect->add_option("--summary", detect_args.summary_path, "Summary JSON path (default stderr)");
  detect->add_option("--plot-data", detect_args.plot_path, "Per-point diagnostics CSV path");
  detect->add_option("--snapshot-in", detect_args.snapshot_in, "Resume from this snapshot");
  detect->add_option("--snapshot-out", detect_args.snapshot_out, "Write detector state here at EOF");
  detect->add_option("--workers", detect_args.workers, "Worker threads for keyed input")
      ->capture_default_str();
  detect->add_option("--burn-in", detect_args.burn_in, "Baseline burn-in samples")
      ->capture_default_str();
  detect->add_option("--drift", detect_args.drift, "cusum reference value")->capture_default_str();
  detect->add_option("--threshold", detect_args.threshold, "cusum decision interval")
      ->capture_default_str();
  detect->add_option("--weight", detect_args.weight, "ewma smoothing weight")->capture_default_str();
  detect->add_option("--limit", detect_args.limit, "ewma control width")->capture_default_str();

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Reproduce the benchmark tables and sweeps");
  bench->set_config("--config", "", "Read options from a key=value file");
  bench->add_option("--out", bench_args.out, "Report CSV path")->capture_default_str();
  bench->add_option("--seed", bench_args.seed, "Base seed")->capture_default_str();
  bench->add_option("--points", bench_args.points, "Length of the long streams")
      ->capture_default_str();
  bench->add_option("--period", bench_args.period, "Regime length of the long streams")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return run_gen(gen_args);
    if (detect->parsed()) return run_detect(detect_args);
    if (bench->parsed()) return run_bench(bench_args);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
