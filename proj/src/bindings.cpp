#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tgrasp/controller.hpp"
#include "tgrasp/harness.hpp"
#include "tgrasp/hand.hpp"
#include "tgrasp/sensors.hpp"
#include "tgrasp/slip.hpp"
#include "tgrasp/world.hpp"

namespace py = pybind11;
using namespace tgrasp;

namespace {

std::vector<RawBiotacSample> to_samples(const std::vector<std::pair<double, double>>& ts) {
  std::vector<RawBiotacSample> out;
  out.reserve(ts.size());
  for (const auto& [t, p] : ts) out.push_back(RawBiotacSample{p, t});
  return out;
}

py::dict trial_to_dict(const TrialResult& r) {
  py::dict d;
  d["object_name"] = r.object_name;
  d["seed"] = r.seed;
  d["success"] = r.success;
  d["failure_reason"] = failure_reason_name(r.failure_reason);
  d["total_slip_m"] = r.total_slip_m;
  d["peak_grip_force_n"] = r.peak_grip_force_n;
  d["duration_s"] = r.duration_s;
  py::dict phases;
  for (int p = 0; p < kNumPhases; ++p) {
    phases[phase_name(static_cast<ControllerPhase>(p))] =
        r.phase_durations[static_cast<std::size_t>(p)];
  }
  d["phase_durations"] = phases;
  d["ticks"] = r.trace.size();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tactile-only grasp controller and simulation";

  py::enum_<Digit>(m, "Digit")
      .value("FF", Digit::FF)
      .value("MF", Digit::MF)
      .value("RF", Digit::RF)
      .value("LF", Digit::LF)
      .value("TH", Digit::TH);

  py::enum_<Joint>(m, "Joint")
      .value("J1", Joint::J1)
      .value("J2", Joint::J2)
      .value("J3", Joint::J3)
      .value("J4", Joint::J4)
      .value("J5", Joint::J5);

  py::class_<FingerState>(m, "FingerState")
      .def_static("make_finger", &FingerState::make_finger)
      .def_static("make_thumb", &FingerState::make_thumb)
      .def("angle", &FingerState::angle)
      .def("set_angle", &FingerState::set_angle)
      .def("has_joint", &FingerState::has_joint)
      .def("base_joint", &FingerState::base_joint)
      .def("is_thumb", &FingerState::is_thumb)
      .def_readwrite("enabled", &FingerState::enabled);

  m.def("actuate_virtual_j0", &actuate_virtual_j0, py::arg("finger"), py::arg("delta_rad"),
        py::arg("saturation_rad") = kDefaultJ2SaturationRad,
        "Drive the coupled J1/J2 pair: J2 first, J1 once J2 saturates.");
  m.def("actuate_base", &actuate_base, "Advance the base joint (J3, thumb J4), clamped.");
  m.def("fingertip_closure", &fingertip_closure,
        "Closure proxy in [0,1]: (J1 + J2 + base joint) / 270 degrees.");

  py::class_<Baseline>(m, "Baseline")
      .def_readonly("mean", &Baseline::mean)
      .def_readonly("window", &Baseline::window)
      .def_readonly("n_samples", &Baseline::n_samples);

  m.def(
      "tare",
      [](const std::vector<std::pair<double, double>>& t_p, int n_samples, double window) {
        const auto samples = to_samples(t_p);
        return tare(samples, n_samples, window);
      },
      py::arg("samples"), py::arg("n_samples") = 50, py::arg("window") = 200.0,
      "Baseline from (t, p_dc) idle samples.");
  m.def(
      "normalize",
      [](double p_dc, const Baseline& base) { return normalize(RawBiotacSample{p_dc, 0.0}, base); },
      py::arg("p_dc"), py::arg("baseline"),
      "clamp((p_dc - mean) / window, 0, 1)");

  py::class_<FsrCalibration>(m, "FsrCalibration")
      .def_readonly("slope", &FsrCalibration::slope)
      .def_readonly("intercept", &FsrCalibration::intercept)
      .def("predict", &FsrCalibration::predict);
  m.def(
      "fit_fsr_calibration",
      [](const std::vector<std::pair<double, double>>& pairs) { return fit_fsr_calibration(pairs); },
      "Least-squares force calibration from (raw counts, newtons) pairs.");

  m.def(
      "window_slope",
      [](const std::vector<std::pair<double, double>>& samples) { return window_slope(samples); },
      "OLS slope of s against t.");

  py::class_<SlipParams>(m, "SlipParams")
      .def(py::init<>())
      .def_readwrite("window_s", &SlipParams::window_s)
      .def_readwrite("theta_slip", &SlipParams::theta_slip)
      .def_readwrite("theta_abs", &SlipParams::theta_abs)
      .def_readwrite("g_slip", &SlipParams::g_slip)
      .def_readwrite("theta_max_slip", &SlipParams::theta_max_slip);

  py::class_<SlipEstimate>(m, "SlipEstimate")
      .def_readonly("slope", &SlipEstimate::slope)
      .def_readonly("delta_slope", &SlipEstimate::delta_slope)
      .def_readonly("severity", &SlipEstimate::severity)
      .def_readonly("slipping", &SlipEstimate::slipping)
      .def_readonly("window_end_t", &SlipEstimate::window_end_t);

  py::class_<SlipDetector>(m, "SlipDetector")
      .def(py::init<const SlipParams&, double>(), py::arg("params"), py::arg("sample_dt"))
      .def("update", &SlipDetector::update)
      .def("reset", &SlipDetector::reset)
      .def_property_readonly("samples_per_window", &SlipDetector::samples_per_window);

  m.def("severity_to_correction", &severity_to_correction);

  py::class_<EasingParams>(m, "EasingParams")
      .def(py::init<>())
      .def_readwrite("kappa1", &EasingParams::kappa1)
      .def_readwrite("kappa2", &EasingParams::kappa2)
      .def_readwrite("a1", &EasingParams::a1)
      .def_readwrite("a2", &EasingParams::a2)
      .def_readwrite("b1", &EasingParams::b1)
      .def_readwrite("b2", &EasingParams::b2)
      .def_readwrite("theta_min", &EasingParams::theta_min)
      .def_readwrite("theta_max", &EasingParams::theta_max);

  m.def("bezier_ease", &bezier_ease, py::arg("s_biotac"), py::arg("params") = EasingParams{},
        "theta_beta = s^2 * (kappa1 - kappa2 * s)");
  m.def("control_step_size", &control_step_size, py::arg("theta_beta"),
        py::arg("params") = EasingParams{},
        "Affine map of theta_beta from [a1, a2] onto [b1, b2].");

  py::class_<ObjectSpec>(m, "ObjectSpec")
      .def(py::init<>())
      .def_readwrite("name", &ObjectSpec::name)
      .def_readwrite("mass_kg", &ObjectSpec::mass_kg)
      .def_readwrite("mu_static", &ObjectSpec::mu_static)
      .def_readwrite("mu_kinetic", &ObjectSpec::mu_kinetic)
      .def_readwrite("stiffness_n_per_m", &ObjectSpec::stiffness_n_per_m)
      .def_readwrite("size_m", &ObjectSpec::size_m);

  m.def(
      "load_object_dataset",
      [](const std::string& path) { return load_object_dataset(path); },
      "Objects from a JSON dataset file.");

  m.def(
      "run_trial",
      [](const ObjectSpec& object, std::uint64_t seed, bool slip_comp) {
        FullConfig cfg;
        cfg.sim.seed = seed;
        TrialOptions options;
        options.slip_comp_enabled = slip_comp;
        const TrialResult r = run_grasp(make_world(object, cfg.world), cfg, options);
        return trial_to_dict(r);
      },
      py::arg("object"), py::arg("seed") = 0, py::arg("slip_comp") = true,
      "Run one grasp trial with default configuration.");

  m.def(
      "run_trial_with_config",
      [](const ObjectSpec& object, const std::string& config_path, std::uint64_t seed,
         bool slip_comp) {
        FullConfig cfg = load_config(config_path);
        cfg.sim.seed = seed;
        TrialOptions options;
        options.slip_comp_enabled = slip_comp;
        const TrialResult r = run_grasp(make_world(object, cfg.world), cfg, options);
        return trial_to_dict(r);
      },
      py::arg("object"), py::arg("config_path"), py::arg("seed") = 0, py::arg("slip_comp") = true);

#ifdef TGRASP_VERSION
  m.attr("__version__") = TGRASP_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
