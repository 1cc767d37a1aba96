// grasp: run seeded batches of simulated grasp trials, plot traces, and
// replay slip detection offline. Exit codes: 0 ok, 2 input error, 3 output error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tgrasp/harness.hpp"
#include "tgrasp/plot.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitOutputError = 3;

tgrasp::FingerDropEvent parse_drop_spec(const std::string& spec) {
  const auto at = spec.find('@');
  if (at == std::string::npos) {
    throw std::invalid_argument("--drop-fingers expects <list>@<time_s>, e.g. RF,LF@12.5");
  }
  tgrasp::FingerDropEvent event;
  event.at_time_s = std::stod(spec.substr(at + 1));

  std::string list = spec.substr(0, at);
  std::size_t pos = 0;
  while (pos != std::string::npos) {
    const auto comma = list.find(',', pos);
    const std::string name =
        list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!name.empty()) event.digits.push_back(tgrasp::digit_from_name(name));
    pos = comma == std::string::npos ? std::string::npos : comma + 1;
  }
  if (event.digits.empty()) throw std::invalid_argument("--drop-fingers: no digits given");
  return event;
}

int cmd_run(const std::string& dataset_path, const std::string& config_path, int trials,
            std::uint64_t seed, const std::string& out_dir, int parallel,
            bool disable_slip_comp, const std::string& drop_spec) {
  std::vector<tgrasp::ObjectSpec> dataset;
  tgrasp::FullConfig cfg;
  tgrasp::BatchOptions options;
  try {
    if (trials < 1) throw std::invalid_argument("--trials must be at least 1");
    dataset = tgrasp::load_object_dataset(dataset_path);
    cfg = config_path.empty() ? tgrasp::FullConfig{} : tgrasp::load_config(config_path);
    options.trials_per_object = trials;
    options.seed = seed;
    options.parallel = parallel;
    options.out_dir = out_dir;
    options.trial.slip_comp_enabled = !disable_slip_comp;
    if (!drop_spec.empty()) options.trial.drop_fingers = parse_drop_spec(drop_spec);
  } catch (const std::exception& e) {
    std::cerr << "grasp run: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    std::filesystem::create_directories(out_dir);
    const tgrasp::BatchReport report = tgrasp::run_batch(dataset, cfg, options);
    tgrasp::write_report_files(report, out_dir);
    std::cout << tgrasp::report_text(report);
    std::cout << "report: " << (std::filesystem::path(out_dir) / "report.json").string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "grasp run: " << e.what() << "\n";
    return kExitOutputError;
  }
  return kExitOk;
}

int cmd_plot(const std::string& trace_path, const std::string& out_path) {
  std::vector<tgrasp::TraceRow> trace;
  try {
    trace = tgrasp::read_trace_csv(trace_path);
  } catch (const std::exception& e) {
    std::cerr << "grasp plot: " << e.what() << "\n";
    return kExitInputError;
  }
  try {
    tgrasp::plot_summary(trace, out_path);
    std::cout << "wrote " << out_path << "\n";
  } catch (const std::exception& e) {
    std::cerr << "grasp plot: " << e.what() << "\n";
    return kExitOutputError;
  }
  return kExitOk;
}

int cmd_replay_slip(const std::string& trace_path, const std::string& config_path) {
  std::vector<tgrasp::TraceRow> trace;
  tgrasp::SlipParams params;
  try {
    trace = tgrasp::read_trace_csv(trace_path);
    if (!config_path.empty()) params = tgrasp::load_config(config_path).controller.slip;
    if (trace.size() < 2) throw std::runtime_error("trace too short for slip replay");
  } catch (const std::exception& e) {
    std::cerr << "grasp replay-slip: " << e.what() << "\n";
    return kExitInputError;
  }

  const double dt = trace[1].t - trace[0].t;
  int windows = 0, slipping_windows = 0;
  for (tgrasp::Digit d : tgrasp::kAllDigits) {
    tgrasp::SlipDetector detector(params, dt);
    const std::size_t i = static_cast<std::size_t>(d);
    int digit_windows = 0, digit_slipping = 0;
    double first_slip_t = -1.0;
    for (const tgrasp::TraceRow& row : trace) {
      if (auto est = detector.update(row.t, row.digits[i].s_biotac)) {
        ++digit_windows;
        if (est->slipping) {
          ++digit_slipping;
          if (first_slip_t < 0.0) first_slip_t = est->window_end_t;
        }
      }
    }
    windows += digit_windows;
    slipping_windows += digit_slipping;
    std::printf("%s: %d windows, %d slipping", tgrasp::digit_name(d), digit_windows,
                digit_slipping);
    if (first_slip_t >= 0.0) std::printf(", first at t=%.3fs", first_slip_t);
    std::printf("\n");
  }
  std::printf("total: %d windows, %d slipping\n", windows, slipping_windows);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tactile-only grasp simulation harness"};
  app.require_subcommand(1);

  std::string dataset_path, config_path, out_dir, trace_path, out_path, drop_spec;
  int trials = 20, parallel = 1;
  std::uint64_t seed = 0;
  bool disable_slip_comp = false;

  CLI::App* run = app.add_subcommand("run", "Run a batch of grasp trials");
  run->add_option("--dataset", dataset_path, "Object dataset JSON")->required();
  run->add_option("--config", config_path, "Config JSON (defaults when omitted)");
  run->add_option("--trials", trials, "Trials per object");
  run->add_option("--seed", seed, "Base seed; per-trial seed is seed XOR trial index");
  run->add_option("--out", out_dir, "Output directory for report and traces")->required();
  run->add_option("--parallel", parallel, "Worker threads");
  run->add_flag("--disable-slip-comp", disable_slip_comp, "Turn slip compensation off");
  run->add_option("--drop-fingers", drop_spec, "Disable digits mid-trial: <list>@<time_s>");

  CLI::App* plot = app.add_subcommand("plot", "Render a trace as SVG");
  plot->add_option("--trace", trace_path, "Trace CSV")->required();
  plot->add_option("--out", out_path, "Output SVG path")->required();

  CLI::App* replay = app.add_subcommand("replay-slip", "Offline slip detection on a trace");
  replay->add_option("--trace", trace_path, "Trace CSV")->required();
  replay->add_option("--config", config_path, "Config JSON for slip thresholds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInputError;
  }

  if (run->parsed()) {
    return cmd_run(dataset_path, config_path, trials, seed, out_dir, parallel,
                   disable_slip_comp, drop_spec);
  }
  if (plot->parsed()) return cmd_plot(trace_path, out_path);
  return cmd_replay_slip(trace_path, config_path);
}
