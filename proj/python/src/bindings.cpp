#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "streamcpd/autotune.hpp"
#include "streamcpd/cusum.hpp"
#include "streamcpd/datagen.hpp"
#include "streamcpd/detector.hpp"
#include "streamcpd/ewma.hpp"
#include "streamcpd/metrics.hpp"
#include "streamcpd/snapshot.hpp"

namespace py = pybind11;
using namespace streamcpd;

namespace {

Eigen::VectorXd to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
  if (x.ndim() != 1) throw InputError("expected a one-dimensional array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(x.shape(0)));
  for (py::ssize_t i = 0; i < x.shape(0); ++i) out(static_cast<Eigen::Index>(i)) = x.at(i);
  return out;
}

py::array_t<double> stream_array(const StreamWithTruth& s) {
  if (s.dim == 1) {
    py::array_t<double> out(static_cast<py::ssize_t>(s.size()));
    std::copy(s.data.begin(), s.data.end(), out.mutable_data());
    return out;
  }
  py::array_t<double> out({static_cast<py::ssize_t>(s.size()), static_cast<py::ssize_t>(s.dim)});
  std::copy(s.data.begin(), s.data.end(), out.mutable_data());
  return out;
}

std::vector<ChangepointEvent> detect_series(
    const py::array_t<double, py::array::c_style | py::array::forcecast>& values,
    const DetectorConfig& cfg, bool log_transform) {
  std::vector<ChangepointEvent> events;
  if (values.ndim() == 1) {
    UnivariateDetector d(cfg);
    const auto* data = values.data();
    for (py::ssize_t i = 0; i < values.shape(0); ++i) {
      const double x = log_transform ? std::log(data[i]) : data[i];
      const auto r = d.step(x);
      if (r.event) events.push_back(*r.event);
    }
    return events;
  }
  if (values.ndim() == 2) {
    MultivariateDetector d(cfg);
    const py::ssize_t n = values.shape(0);
    const py::ssize_t dim = values.shape(1);
    const auto* data = values.data();
    for (py::ssize_t i = 0; i < n; ++i) {
      Eigen::VectorXd x(static_cast<Eigen::Index>(dim));
      for (py::ssize_t c = 0; c < dim; ++c) {
        const double v = data[i * dim + c];
        x(static_cast<Eigen::Index>(c)) = log_transform ? std::log(v) : v;
      }
      const auto r = d.step(x);
      if (r.event) events.push_back(*r.event);
    }
    return events;
  }
  throw InputError("expected a 1-d or 2-d array of observations");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Budget-bounded online changepoint detection";

  py::register_exception<ConfigError>(m, "ConfigurationError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<NormalGammaParams>(m, "NormalGammaParams")
      .def(py::init([](double alpha, double beta, double kappa, double mu) {
             NormalGammaParams p{alpha, beta, kappa, mu};
             p.validate();
             return p;
           }),
           py::arg("alpha") = 2.0, py::arg("beta") = 1.0, py::arg("kappa") = 1.0,
           py::arg("mu") = 0.0)
      .def_readwrite("alpha", &NormalGammaParams::alpha)
      .def_readwrite("beta", &NormalGammaParams::beta)
      .def_readwrite("kappa", &NormalGammaParams::kappa)
      .def_readwrite("mu", &NormalGammaParams::mu)
      .def("__repr__", [](const NormalGammaParams& p) {
        return "NormalGammaParams(alpha=" + std::to_string(p.alpha) +
               ", beta=" + std::to_string(p.beta) + ", kappa=" + std::to_string(p.kappa) +
               ", mu=" + std::to_string(p.mu) + ")";
      });

  m.def("update", py::overload_cast<const NormalGammaParams&, double>(&update), py::arg("params"),
        py::arg("x"), "Absorb one observation into the conjugate state");
  m.def("predictive_logpdf",
        py::overload_cast<const NormalGammaParams&, double>(&predictive_logpdf), py::arg("params"),
        py::arg("x"), "Log density of the posterior predictive");

  py::class_<AutotuneConfig>(m, "AutotuneConfig")
      .def(py::init<>())
      .def_readwrite("warmup_size", &AutotuneConfig::warmup_size)
      .def_readwrite("alpha0", &AutotuneConfig::alpha0)
      .def_readwrite("kappa0", &AutotuneConfig::kappa0)
      .def_readwrite("epsilon", &AutotuneConfig::epsilon);

  m.def(
      "autotune",
      [](const std::vector<double>& warmup, const AutotuneConfig& cfg) {
        return autotune(std::span<const double>(warmup), cfg);
      },
      py::arg("warmup"), py::arg("config") = AutotuneConfig{},
      "Estimate prior parameters from warmup samples");

  py::class_<DetectorConfig>(m, "DetectorConfig")
      .def(py::init<>())
      .def_readwrite("lambda_", &DetectorConfig::lambda)
      .def_readwrite("budget", &DetectorConfig::budget)
      .def_readwrite("confirmation", &DetectorConfig::confirmation)
      .def_readwrite("min_posterior", &DetectorConfig::min_posterior)
      .def_readwrite("score_clip", &DetectorConfig::score_clip)
      .def_readwrite("autotune", &DetectorConfig::autotune)
      .def_readwrite("tune", &DetectorConfig::tune);

  py::class_<ChangepointEvent>(m, "ChangepointEvent")
      .def_readonly("detected_at", &ChangepointEvent::detected_at)
      .def_readonly("location", &ChangepointEvent::location)
      .def_readonly("map_posterior", &ChangepointEvent::map_posterior)
      .def_readonly("map_run_length", &ChangepointEvent::map_run_length)
      .def("__repr__", [](const ChangepointEvent& e) {
        return "ChangepointEvent(location=" + std::to_string(e.location) +
               ", detected_at=" + std::to_string(e.detected_at) + ")";
      });

  py::class_<StepResult>(m, "StepResult")
      .def_readonly("scored", &StepResult::scored)
      .def_readonly("event", &StepResult::event)
      .def_readonly("marginal_logpdf", &StepResult::marginal_logpdf)
      .def_readonly("map_run_length", &StepResult::map_run_length)
      .def_readonly("map_posterior", &StepResult::map_posterior);

  py::class_<UnivariateDetector>(m, "Detector")
      .def(py::init<const DetectorConfig&>(), py::arg("config") = DetectorConfig{})
      .def(py::init<const DetectorConfig&, const NormalGammaParams&>(), py::arg("config"),
           py::arg("prior"))
      .def("step", &UnivariateDetector::step, py::arg("x"))
      .def("map_run_length", &UnivariateDetector::map_run_length)
      .def("marginal_predictive_logpdf", &UnivariateDetector::marginal_predictive_logpdf,
           py::arg("x"))
      .def("run_length_posterior", &UnivariateDetector::run_length_posterior)
      .def_property_readonly("observations_seen", &UnivariateDetector::observations_seen)
      .def_property_readonly("warmed_up", &UnivariateDetector::warmed_up)
      .def("snapshot", [](const UnivariateDetector& d) { return save_snapshot(d); })
      .def_static("from_snapshot", &load_univariate_snapshot, py::arg("text"));

  py::class_<MultivariateDetector>(m, "MultivariateDetector")
      .def(py::init<const DetectorConfig&>(), py::arg("config") = DetectorConfig{})
      .def(
          "step",
          [](MultivariateDetector& d,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
            return d.step(to_vector(x));
          },
          py::arg("x"))
      .def("run_length_posterior", &MultivariateDetector::run_length_posterior)
      .def_property_readonly("observations_seen", &MultivariateDetector::observations_seen)
      .def_property_readonly("warmed_up", &MultivariateDetector::warmed_up)
      .def("snapshot", [](const MultivariateDetector& d) { return save_snapshot(d); })
      .def_static("from_snapshot", &load_multivariate_snapshot, py::arg("text"));

  m.def("detect", &detect_series, py::arg("values"), py::arg("config") = DetectorConfig{},
        py::arg("log_transform") = false,
        "Run a detector over a whole series; rows of a 2-d array are observations");

  py::class_<CusumConfig>(m, "CusumConfig")
      .def(py::init<>())
      .def_readwrite("burn_in", &CusumConfig::burn_in)
      .def_readwrite("drift", &CusumConfig::drift)
      .def_readwrite("threshold", &CusumConfig::threshold);

  py::class_<CusumDetector>(m, "CusumDetector")
      .def(py::init<const CusumConfig&>(), py::arg("config") = CusumConfig{})
      .def("step", &CusumDetector::step, py::arg("x"));

  py::class_<EwmaConfig>(m, "EwmaConfig")
      .def(py::init<>())
      .def_readwrite("burn_in", &EwmaConfig::burn_in)
      .def_readwrite("weight", &EwmaConfig::weight)
      .def_readwrite("limit", &EwmaConfig::limit);

  py::class_<EwmaDetector>(m, "EwmaDetector")
      .def(py::init<const EwmaConfig&>(), py::arg("config") = EwmaConfig{})
      .def("step", &EwmaDetector::step, py::arg("x"));

  py::enum_<PenaltyRule>(m, "PenaltyRule")
      .value("UNMATCHED_ONLY", PenaltyRule::UnmatchedOnly)
      .value("LITERAL", PenaltyRule::Literal);

  py::class_<MaeReport>(m, "MaeReport")
      .def_readonly("loss", &MaeReport::loss)
      .def_readonly("matched", &MaeReport::matched)
      .def_readonly("unmatched_actual", &MaeReport::unmatched_actual)
      .def_readonly("unmatched_predicted", &MaeReport::unmatched_predicted)
      .def_readonly("n", &MaeReport::n);

  m.def("match_changepoints", &match_changepoints, py::arg("actual"), py::arg("predicted"));
  m.def("mae_with_penalty", &mae_with_penalty, py::arg("actual"), py::arg("predicted"),
        py::arg("n"), py::arg("rule") = PenaltyRule::UnmatchedOnly);

  py::class_<StreamWithTruth>(m, "Stream")
      .def_property_readonly("values", &stream_array)
      .def_readonly("truth", &StreamWithTruth::truth)
      .def_readonly("seed", &StreamWithTruth::seed)
      .def_readonly("spec", &StreamWithTruth::spec)
      .def_property_readonly("dim", [](const StreamWithTruth& s) { return s.dim; })
      .def("__len__", &StreamWithTruth::size);

  auto gen = m.def_submodule("generate", "Seeded synthetic streams with known changepoints");
  gen.def("normal_switch", &suite::normal_switch, py::arg("n"), py::arg("period"), py::arg("seed"));
  gen.def("normal_uniform", &suite::normal_uniform, py::arg("n"), py::arg("period"),
          py::arg("seed"));
  gen.def("poisson_alternating", &suite::poisson_alternating, py::arg("n"), py::arg("changepoints"),
          py::arg("seed"));
  gen.def("gamma_alternating", &suite::gamma_alternating, py::arg("n"), py::arg("changepoints"),
          py::arg("seed"));
  gen.def("lognormal_alternating", &suite::lognormal_alternating, py::arg("n"),
          py::arg("changepoints"), py::arg("seed"));
  gen.def("mixed_gaussian", &suite::mixed_gaussian, py::arg("n"), py::arg("changepoints"),
          py::arg("seed"));
  gen.def("mv_mean_drift", &suite::mv_mean_drift, py::arg("seed"));
  gen.def("mv_variance_drift", &suite::mv_variance_drift, py::arg("seed"));
  gen.def("mv_covariance_drift", &suite::mv_covariance_drift, py::arg("seed"));
  gen.def("constant_normal", &suite::constant_normal, py::arg("n"), py::arg("mean"),
          py::arg("sigma"), py::arg("seed"));
  gen.def("inject_outliers", &inject_outliers, py::arg("stream"), py::arg("fraction"),
          py::arg("magnitude_sigmas"), py::arg("seed"));
}
