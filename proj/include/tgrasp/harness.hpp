#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tgrasp/controller.hpp"

namespace tgrasp {

/// Loads the full configuration from JSON. Every key is optional and
/// overrides the built-in default; unknown keys are rejected.
FullConfig load_config(const std::string& path);
FullConfig config_from_json_text(const std::string& text, const std::string& origin = "<json>");

struct BatchOptions {
  int trials_per_object = 20;
  std::uint64_t seed = 0;
  int parallel = 1;
  std::string out_dir;  // empty: keep traces in memory only
  TrialOptions trial;
};

struct ObjectStats {
  std::string name;
  int trials = 0;
  int successes = 0;
  double success_pct = 0.0;
};

struct BatchReport {
  std::vector<ObjectStats> per_object;
  int total_trials = 0;
  int total_successes = 0;
  double overall_pct = 0.0;
  std::vector<TrialResult> results;  // trial order: object-major
};

/// Runs trials_per_object seeded trials per object. The per-trial seed is
/// seed XOR trial index, so results are independent of scheduling; trials
/// may run on parallel workers and are merged back in trial order.
BatchReport run_batch(const std::vector<ObjectSpec>& dataset, const FullConfig& cfg,
                      const BatchOptions& options);

/// Trace CSV: t_s, phase, five digit blocks of
/// s_biotac/fsr_n/j1_rad/j2_rad/j3_rad, then palm_z_m, object_z_m,
/// slip_speed_mps, slip_flag. One row per control tick.
void export_trace(const TrialResult& result, std::ostream& out);
void export_trace_file(const TrialResult& result, const std::string& path);
std::vector<TraceRow> read_trace_csv(const std::string& path);

std::string report_text(const BatchReport& report);
std::string report_json(const BatchReport& report);
void write_report_files(const BatchReport& report, const std::string& out_dir);

std::string trace_file_name(int trial_index, const std::string& object_name);

}  // namespace tgrasp
