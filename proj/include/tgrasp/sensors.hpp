#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tgrasp/hand.hpp"

namespace tgrasp {

struct WorldState;

struct RawBiotacSample {
  double p_dc = 0.0;  // raw pressure, sensor counts
  double t = 0.0;     // seconds
};

/// Per-digit resting level established by the tare operation.
struct Baseline {
  double mean = 0.0;     // counts
  double window = 200.0; // counts; full scale of the normalized signal
  int n_samples = 50;
};

struct DigitSample {
  double s_biotac = 0.0;  // normalized fingertip pressure in [0,1]
  double fsr_n = 0.0;     // base-of-finger force, newtons
};

struct TactileFrame {
  std::array<DigitSample, kNumDigits> digits{};
  double t = 0.0;
};

struct FsrCalibration {
  double slope = 0.05;   // newtons per count
  double intercept = 0.0;
  double min_newton = 0.0;
  double max_newton = 50.0;

  double predict(double counts) const;
};

/// Mean of at least n_samples idle readings.
Baseline tare(std::span<const RawBiotacSample> samples, int n_samples = 50,
              double window = 200.0);

/// clamp((p_dc - mean) / window, 0, 1). Deviation below the baseline maps to 0.
double normalize(const RawBiotacSample& raw, const Baseline& base);

/// Ordinary least squares over (raw counts, newtons) pairs.
FsrCalibration fit_fsr_calibration(std::span<const std::pair<double, double>> pairs);

/// Two-column CSV: raw_counts,newtons. A non-numeric first line is treated
/// as a header and skipped.
std::vector<std::pair<double, double>> load_calibration_csv(const std::string& path);

struct SensorParams {
  double baseline_counts = 2000.0;
  double contact_gain = 400.0;         // counts per newton of tip force
  double noise_sigma = 2.0;            // counts
  double bias_sigma = 25.0;            // per-digit resting offset, counts
  double window_counts = 200.0;
  double vibration_freq_hz = 20.0;
  double vibration_gain = 1000.0;      // counts per m/s of slip
  double drift_gain = 40000.0;         // counts per metre of slip (shear build-up rate)
  double drift_tau_s = 0.2;            // shear relaxation time
  double fsr_counts_per_newton = 20.0;
};

struct RawDigitSample {
  double p_dc = 0.0;
  double fsr_counts = 0.0;
};

struct RawFrame {
  std::array<RawDigitSample, kNumDigits> digits{};
  double t = 0.0;
};

/// Synthesizes fingertip pressure and base-force streams from world state.
/// Pressure rises affinely with tip contact force; while the object slips the
/// stream carries a 20 Hz micro-vibration with amplitude proportional to slip
/// speed plus a slowly relaxing shear drift. All randomness comes from the
/// per-trial seed.
class SensorRig {
 public:
  SensorRig(const SensorParams& params, std::uint64_t seed);

  /// One raw sample per digit at world.time. Advances noise and drift state.
  RawFrame sample(const WorldState& world);

  /// Convenience view with the rig's own resting levels already removed and
  /// base force converted exactly. The controller instead tares for itself.
  TactileFrame sample_tactile(const WorldState& world);

  double true_baseline(Digit d) const;
  const SensorParams& params() const { return params_; }

 private:
  SensorParams params_;
  std::mt19937_64 rng_;
  std::array<double, kNumDigits> bias_{};
  std::array<double, kNumDigits> vib_phase_{};
  std::array<double, kNumDigits> drift_{};
  double last_t_ = -1.0;
};

}  // namespace tgrasp
