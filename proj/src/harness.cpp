#include "tgrasp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace tgrasp {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> keys,
                    const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find_if(keys.begin(), keys.end(),
                     [&](const char* k) { return key == k; }) == keys.end()) {
      throw std::runtime_error("unknown config key '" + key + "' in " + where);
    }
  }
}

void get(const json& obj, const char* key, double& out) {
  if (obj.contains(key)) out = obj.at(key).get<double>();
}
void get(const json& obj, const char* key, int& out) {
  if (obj.contains(key)) out = obj.at(key).get<int>();
}
void get(const json& obj, const char* key, bool& out) {
  if (obj.contains(key)) out = obj.at(key).get<bool>();
}
void get(const json& obj, const char* key, std::uint64_t& out) {
  if (obj.contains(key)) out = obj.at(key).get<std::uint64_t>();
}

void parse_easing(const json& obj, EasingParams& e) {
  reject_unknown(obj, {"kappa1", "kappa2", "a1", "a2", "b1", "b2", "theta_min", "theta_max"},
                 "controller.easing");
  get(obj, "kappa1", e.kappa1);
  get(obj, "kappa2", e.kappa2);
  get(obj, "a1", e.a1);
  get(obj, "a2", e.a2);
  get(obj, "b1", e.b1);
  get(obj, "b2", e.b2);
  get(obj, "theta_min", e.theta_min);
  get(obj, "theta_max", e.theta_max);
}

void parse_slip(const json& obj, SlipParams& s) {
  reject_unknown(obj, {"window_s", "theta_slip", "theta_abs", "g_slip", "theta_max_slip"},
                 "controller.slip");
  get(obj, "window_s", s.window_s);
  get(obj, "theta_slip", s.theta_slip);
  get(obj, "theta_abs", s.theta_abs);
  get(obj, "g_slip", s.g_slip);
  get(obj, "theta_max_slip", s.theta_max_slip);
}

}  // namespace

FullConfig config_from_json_text(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed config " + origin + ": " + e.what());
  }

  FullConfig cfg;
  reject_unknown(doc, {"sim", "controller", "sensors", "world"}, origin);

  if (doc.contains("sim")) {
    const json& s = doc.at("sim");
    reject_unknown(s, {"physics_dt", "control_dt", "gravity", "seed"}, "sim");
    get(s, "physics_dt", cfg.sim.physics_dt);
    get(s, "control_dt", cfg.sim.control_dt);
    get(s, "gravity", cfg.sim.gravity);
    get(s, "seed", cfg.sim.seed);
  }
  if (doc.contains("controller")) {
    const json& c = doc.at("controller");
    reject_unknown(c,
                   {"tau_termination", "fsr_contact_threshold", "base_step", "hold_duration",
                    "lift_height", "lift_step", "easing", "slip", "j2_saturation_rad",
                    "drop_threshold_m", "tare_samples", "baseline_window", "time_budget_s",
                    "slip_comp_enabled", "fsr_calibration_csv"},
                   "controller");
    get(c, "tau_termination", cfg.controller.tau_termination);
    get(c, "fsr_contact_threshold", cfg.controller.fsr_contact_threshold);
    get(c, "base_step", cfg.controller.base_step);
    get(c, "hold_duration", cfg.controller.hold_duration);
    get(c, "lift_height", cfg.controller.lift_height);
    get(c, "lift_step", cfg.controller.lift_step);
    get(c, "j2_saturation_rad", cfg.controller.j2_saturation_rad);
    get(c, "drop_threshold_m", cfg.controller.drop_threshold_m);
    get(c, "tare_samples", cfg.controller.tare_samples);
    get(c, "baseline_window", cfg.controller.baseline_window);
    get(c, "time_budget_s", cfg.controller.time_budget_s);
    get(c, "slip_comp_enabled", cfg.controller.slip_comp_enabled);
    if (c.contains("easing")) parse_easing(c.at("easing"), cfg.controller.easing);
    if (c.contains("slip")) parse_slip(c.at("slip"), cfg.controller.slip);
    if (c.contains("fsr_calibration_csv")) {
      std::filesystem::path csv = c.at("fsr_calibration_csv").get<std::string>();
      if (csv.is_relative() && origin != "<json>") {
        csv = std::filesystem::path(origin).parent_path() / csv;
      }
      const auto pairs = load_calibration_csv(csv.string());
      cfg.controller.fsr_calibration = fit_fsr_calibration(pairs);
    }
  }
  if (doc.contains("sensors")) {
    const json& s = doc.at("sensors");
    reject_unknown(s,
                   {"baseline_counts", "contact_gain", "noise_sigma", "bias_sigma",
                    "window_counts", "vibration_freq_hz", "vibration_gain", "drift_gain",
                    "drift_tau_s", "fsr_counts_per_newton"},
                   "sensors");
    get(s, "baseline_counts", cfg.sensors.baseline_counts);
    get(s, "contact_gain", cfg.sensors.contact_gain);
    get(s, "noise_sigma", cfg.sensors.noise_sigma);
    get(s, "bias_sigma", cfg.sensors.bias_sigma);
    get(s, "window_counts", cfg.sensors.window_counts);
    get(s, "vibration_freq_hz", cfg.sensors.vibration_freq_hz);
    get(s, "vibration_gain", cfg.sensors.vibration_gain);
    get(s, "drift_gain", cfg.sensors.drift_gain);
    get(s, "drift_tau_s", cfg.sensors.drift_tau_s);
    get(s, "fsr_counts_per_newton", cfg.sensors.fsr_counts_per_newton);
  }
  if (doc.contains("world")) {
    const json& w = doc.at("world");
    reject_unknown(w,
                   {"tip_stiffness", "base_stiffness", "tip_reach_m", "tip_aperture_m",
                    "base_radius_m", "base_aperture_m", "soft_tau_coeff", "grip_span_m"},
                   "world");
    get(w, "tip_stiffness", cfg.world.tip_stiffness);
    get(w, "base_stiffness", cfg.world.base_stiffness);
    get(w, "tip_reach_m", cfg.world.tip_reach_m);
    get(w, "tip_aperture_m", cfg.world.tip_aperture_m);
    get(w, "base_radius_m", cfg.world.base_radius_m);
    get(w, "base_aperture_m", cfg.world.base_aperture_m);
    get(w, "soft_tau_coeff", cfg.world.soft_tau_coeff);
    get(w, "grip_span_m", cfg.world.grip_span_m);
  }

  cfg.sim.validate();
  cfg.controller.validate();
  return cfg;
}

FullConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str(), path);
}

std::string trace_file_name(int trial_index, const std::string& object_name) {
  std::string slug;
  for (char ch : object_name) {
    slug += std::isalnum(static_cast<unsigned char>(ch)) ? static_cast<char>(std::tolower(ch)) : '_';
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03d", trial_index);
  return std::string("trial_") + buf + "_" + slug + ".csv";
}

void export_trace(const TrialResult& result, std::ostream& out) {
  out << "t_s,phase";
  for (Digit d : kAllDigits) {
    std::string p = digit_name(d);
    std::transform(p.begin(), p.end(), p.begin(), [](unsigned char c) { return std::tolower(c); });
    out << ',' << p << "_s_biotac," << p << "_fsr_n," << p << "_j1_rad," << p << "_j2_rad,"
        << p << "_j3_rad";
  }
  out << ",palm_z_m,object_z_m,slip_speed_mps,slip_flag\n";

  for (const TraceRow& row : result.trace) {
    out << fmt(row.t) << ',' << phase_name(row.phase);
    for (const DigitTrace& dt : row.digits) {
      out << ',' << fmt(dt.s_biotac) << ',' << fmt(dt.fsr_n) << ',' << fmt(dt.j1_rad) << ','
          << fmt(dt.j2_rad) << ',' << fmt(dt.j3_rad);
    }
    out << ',' << fmt(row.palm_z_m) << ',' << fmt(row.object_z_m) << ','
        << fmt(row.slip_speed_mps) << ',' << (row.slip_flag ? 1 : 0) << '\n';
  }
}

void export_trace_file(const TrialResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace: " + path);
  export_trace(result, out);
  if (!out.good()) throw std::runtime_error("error while writing trace: " + path);
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace: " + path);

  std::string header;
  if (!std::getline(in, header) || header.rfind("t_s,phase", 0) != 0) {
    throw std::runtime_error("not a trace file (bad header): " + path);
  }

  std::vector<TraceRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 2 + kNumDigits * 5 + 4) {
      throw std::runtime_error("malformed trace row in " + path + ": " + line);
    }
    try {
      TraceRow row;
      std::size_t i = 0;
      row.t = std::stod(cells[i++]);
      row.phase = phase_from_name(cells[i++]);
      for (std::size_t d = 0; d < kNumDigits; ++d) {
        row.digits[d].s_biotac = std::stod(cells[i++]);
        row.digits[d].fsr_n = std::stod(cells[i++]);
        row.digits[d].j1_rad = std::stod(cells[i++]);
        row.digits[d].j2_rad = std::stod(cells[i++]);
        row.digits[d].j3_rad = std::stod(cells[i++]);
      }
      row.palm_z_m = std::stod(cells[i++]);
      row.object_z_m = std::stod(cells[i++]);
      row.slip_speed_mps = std::stod(cells[i++]);
      row.slip_flag = cells[i++] == "1";
      rows.push_back(row);
    } catch (const std::invalid_argument&) {
      throw std::runtime_error("malformed trace row in " + path + ": " + line);
    }
  }
  if (rows.empty()) throw std::runtime_error("trace has no data rows: " + path);
  return rows;
}

BatchReport run_batch(const std::vector<ObjectSpec>& dataset, const FullConfig& cfg,
                      const BatchOptions& options) {
  if (dataset.empty()) throw std::invalid_argument("object dataset is empty");
  if (options.trials_per_object < 1) throw std::invalid_argument("trials_per_object must be >= 1");

  const int total = static_cast<int>(dataset.size()) * options.trials_per_object;
  BatchReport report;
  report.results.resize(static_cast<std::size_t>(total));

  const bool write_traces = !options.out_dir.empty();
  std::filesystem::path trace_dir;
  if (write_traces) {
    trace_dir = std::filesystem::path(options.out_dir) / "traces";
    std::filesystem::create_directories(trace_dir);
  }

  auto run_one = [&](int index) {
    const int obj_idx = index / options.trials_per_object;
    const ObjectSpec& object = dataset[static_cast<std::size_t>(obj_idx)];

    FullConfig trial_cfg = cfg;
    trial_cfg.sim.seed = options.seed ^ static_cast<std::uint64_t>(index);

    TrialResult r = run_grasp(make_world(object, cfg.world), trial_cfg, options.trial);
    if (write_traces) {
      const std::string name = trace_file_name(index, object.name);
      export_trace_file(r, (trace_dir / name).string());
      r.trace_path = "traces/" + name;
    }
    report.results[static_cast<std::size_t>(index)] = std::move(r);
  };

  const int workers = std::clamp(options.parallel, 1, total);
  if (workers <= 1) {
    for (int i = 0; i < total; ++i) run_one(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int i = next.fetch_add(1); i < total; i = next.fetch_add(1)) run_one(i);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
          next.store(total);  // drain remaining work
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  // Serial assembly in trial order keeps the report independent of scheduling.
  for (std::size_t obj = 0; obj < dataset.size(); ++obj) {
    ObjectStats stats;
    stats.name = dataset[obj].name;
    for (int k = 0; k < options.trials_per_object; ++k) {
      const auto& r =
          report.results[obj * static_cast<std::size_t>(options.trials_per_object) +
                         static_cast<std::size_t>(k)];
      ++stats.trials;
      if (r.success) ++stats.successes;
    }
    stats.success_pct = 100.0 * stats.successes / stats.trials;
    report.total_trials += stats.trials;
    report.total_successes += stats.successes;
    report.per_object.push_back(std::move(stats));
  }
  report.overall_pct = 100.0 * report.total_successes / report.total_trials;
  return report;
}

std::string report_text(const BatchReport& report) {
  std::ostringstream out;
  out << "NOTE: object physical parameters are synthetic placeholders.\n";
  out << "Success rate over different object classes\n";
  char line[128];
  std::snprintf(line, sizeof line, "%-28s %8s %12s\n", "Objects", "Trials", "Success (%)");
  out << line;
  for (const ObjectStats& s : report.per_object) {
    std::snprintf(line, sizeof line, "%-28s %8d %12.1f\n", s.name.c_str(), s.trials,
                  s.success_pct);
    out << line;
  }
  std::snprintf(line, sizeof line, "%-28s %8d %12.1f\n", "Overall", report.total_trials,
                report.overall_pct);
  out << line;
  return out.str();
}

std::string report_json(const BatchReport& report) {
  nlohmann::ordered_json doc;
  doc["synthetic_parameters"] = true;
  doc["objects"] = nlohmann::ordered_json::array();
  for (const ObjectStats& s : report.per_object) {
    doc["objects"].push_back({{"name", s.name},
                              {"trials", s.trials},
                              {"successes", s.successes},
                              {"success_pct", s.success_pct}});
  }
  doc["total_trials"] = report.total_trials;
  doc["total_successes"] = report.total_successes;
  doc["overall_pct"] = report.overall_pct;
  doc["trials"] = nlohmann::ordered_json::array();
  for (const TrialResult& r : report.results) {
    doc["trials"].push_back({{"object", r.object_name},
                             {"seed", r.seed},
                             {"success", r.success},
                             {"failure_reason", failure_reason_name(r.failure_reason)},
                             {"duration_s", r.duration_s},
                             {"total_slip_m", r.total_slip_m},
                             {"peak_grip_force_n", r.peak_grip_force_n},
                             {"trace", r.trace_path}});
  }
  return doc.dump(2) + "\n";
}

void write_report_files(const BatchReport& report, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);
  {
    std::ofstream out(dir / "report.json");
    if (!out) throw std::runtime_error("cannot write report.json in " + out_dir);
    out << report_json(report);
  }
  {
    std::ofstream out(dir / "report.txt");
    if (!out) throw std::runtime_error("cannot write report.txt in " + out_dir);
    out << report_text(report);
  }
}

}  // namespace tgrasp
