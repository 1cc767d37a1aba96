#include "tgrasp/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "tgrasp/world.hpp"

namespace tgrasp {

double FsrCalibration::predict(double counts) const {
  return std::clamp(slope * counts + intercept, min_newton, max_newton);
}

Baseline tare(std::span<const RawBiotacSample> samples, int n_samples, double window) {
  if (n_samples < 2) throw std::invalid_argument("tare needs n_samples >= 2");
  if (window <= 0.0) throw std::invalid_argument("tare window must be positive");
  if (samples.size() < static_cast<std::size_t>(n_samples)) {
    throw std::invalid_argument("tare: insufficient samples (" +
                                std::to_string(samples.size()) + " < " +
                                std::to_string(n_samples) + ")");
  }
  double sum = 0.0;
  for (const auto& s : samples) sum += s.p_dc;
  return Baseline{sum / static_cast<double>(samples.size()), window, n_samples};
}

double normalize(const RawBiotacSample& raw, const Baseline& base) {
  if (base.window <= 0.0) throw std::invalid_argument("baseline window must be positive");
  return std::clamp((raw.p_dc - base.mean) / base.window, 0.0, 1.0);
}

FsrCalibration fit_fsr_calibration(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 2) throw std::invalid_argument("calibration needs at least 2 pairs");

  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& [x, y] : pairs) {
    mean_x += x;
    mean_y += y;
  }
  mean_x /= static_cast<double>(pairs.size());
  mean_y /= static_cast<double>(pairs.size());

  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pairs) {
    sxx += (x - mean_x) * (x - mean_x);
    sxy += (x - mean_x) * (y - mean_y);
  }
  if (sxx == 0.0) throw std::invalid_argument("degenerate calibration fit: zero variance in raw counts");

  FsrCalibration cal;
  cal.slope = sxy / sxx;
  cal.intercept = mean_y - cal.slope * mean_x;
  if (cal.slope <= 0.0) throw std::invalid_argument("degenerate calibration fit: non-positive slope");
  return cal;
}

std::vector<std::pair<double, double>> load_calibration_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open calibration file: " + path);

  std::vector<std::pair<double, double>> pairs;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x = 0.0, y = 0.0;
    if (!(row >> x >> y)) {
      if (first) {  // header row
        first = false;
        continue;
      }
      throw std::runtime_error("malformed calibration row: " + line);
    }
    first = false;
    pairs.emplace_back(x, y);
  }
  if (pairs.empty()) throw std::runtime_error("calibration file has no data rows: " + path);
  return pairs;
}

SensorRig::SensorRig(const SensorParams& params, std::uint64_t seed)
    : params_(params), rng_(seed) {
  std::normal_distribution<double> bias(0.0, params_.bias_sigma);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (std::size_t d = 0; d < kNumDigits; ++d) bias_[d] = bias(rng_);
  for (std::size_t d = 0; d < kNumDigits; ++d) vib_phase_[d] = phase(rng_);
}

double SensorRig::true_baseline(Digit d) const {
  return params_.baseline_counts + bias_[static_cast<std::size_t>(d)];
}

RawFrame SensorRig::sample(const WorldState& world) {
  const double t = world.time;
  const double dt = (last_t_ < 0.0) ? 0.0 : t - last_t_;
  last_t_ = t;

  std::normal_distribution<double> noise(0.0, params_.noise_sigma);

  RawFrame frame;
  frame.t = t;
  for (std::size_t d = 0; d < kNumDigits; ++d) {
    const DigitContact& c = world.contacts[d];
    const double slip = c.tip_in_contact ? world.slip_speed : 0.0;

    if (dt > 0.0) {
      drift_[d] += (params_.drift_gain * slip - drift_[d] / params_.drift_tau_s) * dt;
    }

    double vib = 0.0;
    if (c.tip_in_contact && slip > 0.0) {
      vib = params_.vibration_gain * slip *
            std::sin(2.0 * std::numbers::pi * params_.vibration_freq_hz * t + vib_phase_[d]);
    }

    frame.digits[d].p_dc = params_.baseline_counts + bias_[d] +
                           params_.contact_gain * c.tip_force_n + drift_[d] + vib +
                           noise(rng_);
    frame.digits[d].fsr_counts = params_.fsr_counts_per_newton * c.base_force_n;
  }
  return frame;
}

TactileFrame SensorRig::sample_tactile(const WorldState& world) {
  const RawFrame raw = sample(world);
  TactileFrame frame;
  frame.t = raw.t;
  for (std::size_t d = 0; d < kNumDigits; ++d) {
    const Baseline base{params_.baseline_counts + bias_[d], params_.window_counts, 0};
    frame.digits[d].s_biotac = std::clamp(
        (raw.digits[d].p_dc - base.mean) / base.window, 0.0, 1.0);
    frame.digits[d].fsr_n = raw.digits[d].fsr_counts / params_.fsr_counts_per_newton;
  }
  return frame;
}

}  // namespace tgrasp
