#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tgrasp/harness.hpp"
#include "tgrasp/plot.hpp"

using namespace tgrasp;

namespace {

const std::string kDataDir = TGRASP_DATA_DIR;

std::vector<ObjectSpec> small_dataset() {
  auto all = load_object_dataset(kDataDir + "/objects.json");
  return {all[6], all[9]};  // Electronics Box, Soft Toy
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("tgrasp_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("run_batch: counts, report arithmetic, trial order") {
  const auto dataset = small_dataset();
  FullConfig cfg;
  BatchOptions opt;
  opt.trials_per_object = 3;
  opt.seed = 5;

  const BatchReport report = run_batch(dataset, cfg, opt);
  CHECK(report.results.size() == 6);
  CHECK(report.per_object.size() == 2);
  CHECK(report.total_trials == 6);
  int successes = 0;
  for (const auto& r : report.results) {
    if (r.success) ++successes;
    CHECK((r.success == (r.failure_reason == FailureReason::none)));
  }
  CHECK(report.total_successes == successes);
  CHECK(report.overall_pct == doctest::Approx(100.0 * successes / 6.0));

  // object-major trial order with XOR-derived seeds
  CHECK(report.results[0].object_name == "Electronics Box");
  CHECK(report.results[3].object_name == "Soft Toy");
  CHECK(report.results[4].seed == (5ull ^ 4ull));
}

TEST_CASE("run_batch: empty dataset and bad trial count are rejected") {
  FullConfig cfg;
  CHECK_THROWS_AS((void)run_batch({}, cfg, BatchOptions{}), std::invalid_argument);
  BatchOptions opt;
  opt.trials_per_object = 0;
  CHECK_THROWS_AS((void)run_batch(small_dataset(), cfg, opt), std::invalid_argument);
}

TEST_CASE("run_batch: serial and parallel runs produce identical results") {
  const auto dataset = small_dataset();
  FullConfig cfg;
  BatchOptions serial;
  serial.trials_per_object = 4;
  serial.seed = 9;
  BatchOptions parallel = serial;
  parallel.parallel = 4;

  const BatchReport a = run_batch(dataset, cfg, serial);
  const BatchReport b = run_batch(dataset, cfg, parallel);
  CHECK(report_json(a) == report_json(b));
  REQUIRE(a.results.size() == b.results.size());
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    std::ostringstream ta, tb;
    export_trace(a.results[i], ta);
    export_trace(b.results[i], tb);
    REQUIRE(ta.str() == tb.str());
  }
}

TEST_CASE("trace schema: column count, row count, free-space rows") {
  FullConfig cfg;
  cfg.sim.seed = 3;
  const ObjectSpec box = small_dataset()[0];
  const TrialResult r = run_grasp(make_world(box, cfg.world), cfg, {});

  std::ostringstream out;
  export_trace(r, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);

  // 1 time + 1 phase + 5 digits x 5 signals + 4 world columns
  CHECK(std::count(header.begin(), header.end(), ',') + 1 == 31);
  CHECK(header.rfind("t_s,phase,ff_s_biotac", 0) == 0);

  int rows = 0;
  bool fsr_zero_before_contact = true;
  std::string line;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find("PreGrasp") != std::string::npos ||
        line.find("Taring") != std::string::npos) {
      std::stringstream ss(line);
      std::string cell;
      std::vector<std::string> cells;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      for (std::size_t d = 0; d < kNumDigits; ++d) {
        if (cells[3 + d * 5] != "0") fsr_zero_before_contact = false;
      }
    }
  }
  CHECK(fsr_zero_before_contact);
  CHECK(rows == static_cast<int>(r.trace.size()));
  // one row per control tick
  CHECK(rows == static_cast<int>(std::llround(r.duration_s / cfg.sim.control_dt)));
}

TEST_CASE("trace files round-trip through the reader") {
  FullConfig cfg;
  cfg.sim.seed = 12;
  const TrialResult r = run_grasp(make_world(small_dataset()[0], cfg.world), cfg, {});
  const auto dir = temp_dir("roundtrip");
  const std::string path = (dir / "trace.csv").string();
  export_trace_file(r, path);

  const auto rows = read_trace_csv(path);
  REQUIRE(rows.size() == r.trace.size());
  for (std::size_t i = 0; i < rows.size(); i += 97) {
    CHECK(rows[i].phase == r.trace[i].phase);
    CHECK(rows[i].palm_z_m == doctest::Approx(r.trace[i].palm_z_m).epsilon(1e-9));
    CHECK(rows[i].digits[4].j1_rad == doctest::Approx(r.trace[i].digits[4].j1_rad).epsilon(1e-9));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("read_trace_csv rejects non-trace files") {
  const auto dir = temp_dir("badtrace");
  const std::string path = (dir / "junk.csv").string();
  std::ofstream(path) << "a,b,c\n1,2,3\n";
  CHECK_THROWS_AS((void)read_trace_csv(path), std::runtime_error);
  CHECK_THROWS_AS((void)read_trace_csv((dir / "missing.csv").string()), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("report text mirrors the per-object table with an overall row") {
  const auto dataset = small_dataset();
  FullConfig cfg;
  BatchOptions opt;
  opt.trials_per_object = 2;
  const BatchReport report = run_batch(dataset, cfg, opt);
  const std::string text = report_text(report);
  CHECK(text.find("synthetic") != std::string::npos);
  CHECK(text.find("Electronics Box") != std::string::npos);
  CHECK(text.find("Soft Toy") != std::string::npos);
  CHECK(text.find("Overall") != std::string::npos);
}

TEST_CASE("config loading: overrides and unknown keys") {
  const std::string text = R"({
    "sim": {"seed": 7, "control_dt": 0.005},
    "controller": {"tau_termination": 0.2, "easing": {"b1": 0.04, "theta_max": 0.04}},
    "sensors": {"noise_sigma": 1.5},
    "world": {"tip_stiffness": 250.0}
  })";
  const FullConfig cfg = config_from_json_text(text);
  CHECK(cfg.sim.seed == 7);
  CHECK(cfg.sim.control_dt == 0.005);
  CHECK(cfg.controller.tau_termination == 0.2);
  CHECK(cfg.controller.easing.b1 == 0.04);
  CHECK(cfg.sensors.noise_sigma == 1.5);
  CHECK(cfg.world.tip_stiffness == 250.0);
  // untouched defaults survive
  CHECK(cfg.controller.hold_duration == 10.0);

  CHECK_THROWS_AS((void)config_from_json_text(R"({"controler": {}})"), std::runtime_error);
  CHECK_THROWS_AS((void)config_from_json_text(R"({"sim": {"controldt": 1}})"),
                  std::runtime_error);
  CHECK_THROWS_AS((void)config_from_json_text("not json"), std::runtime_error);
  // invalid values fail validation
  CHECK_THROWS((void)config_from_json_text(R"({"sim": {"control_dt": 0.03}})"));
}

TEST_CASE("config loading: shipped default file and calibration csv hook") {
  const FullConfig cfg = load_config(kDataDir + "/default_config.json");
  CHECK(cfg.controller.tau_termination == 0.1);
  CHECK(cfg.controller.hold_duration == 10.0);
  CHECK(cfg.controller.fsr_calibration.slope == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(cfg.controller.fsr_calibration.intercept == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("plot_summary renders panels and phase markers") {
  FullConfig cfg;
  cfg.sim.seed = 31;
  const TrialResult r = run_grasp(make_world(small_dataset()[0], cfg.world), cfg, {});
  const std::string svg = render_trace_svg(r.trace);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("Fingertip pressure") != std::string::npos);
  CHECK(svg.find("Base force") != std::string::npos);
  CHECK(svg.find("Palm and object height") != std::string::npos);
  CHECK(svg.find("LiftAndHold") != std::string::npos);  // phase marker text

  const auto dir = temp_dir("plot");
  const std::string path = (dir / "trial.svg").string();
  plot_summary(r.trace, path);
  CHECK(std::filesystem::file_size(path) > 1000);
  std::filesystem::remove_all(dir);

  CHECK_THROWS_AS((void)render_trace_svg({}), std::invalid_argument);
}
