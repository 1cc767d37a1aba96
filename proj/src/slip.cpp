#include "tgrasp/slip.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tgrasp {

void SlipParams::validate() const {
  if (window_s <= 0.0) throw std::invalid_argument("slip window must be positive");
  if (theta_slip <= 0.0 || theta_abs <= 0.0) {
    throw std::invalid_argument("slip thresholds must be positive");
  }
  if (g_slip < 0.0 || theta_max_slip < 0.0) {
    throw std::invalid_argument("slip correction gains must be non-negative");
  }
}

double window_slope(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 2) throw std::invalid_argument("slope needs at least 2 samples");

  double mean_t = 0.0, mean_s = 0.0;
  for (const auto& [t, s] : samples) {
    mean_t += t;
    mean_s += s;
  }
  mean_t /= static_cast<double>(samples.size());
  mean_s /= static_cast<double>(samples.size());

  double stt = 0.0, sts = 0.0;
  for (const auto& [t, s] : samples) {
    stt += (t - mean_t) * (t - mean_t);
    sts += (t - mean_t) * (s - mean_s);
  }
  if (stt == 0.0) throw std::invalid_argument("slope needs at least 2 distinct timestamps");
  return sts / stt;
}

SlipDetector::SlipDetector(const SlipParams& params, double sample_dt) : params_(params) {
  params_.validate();
  if (sample_dt <= 0.0) throw std::invalid_argument("sample_dt must be positive");
  samples_per_window_ = static_cast<int>(std::llround(params_.window_s / sample_dt));
  if (samples_per_window_ < 2) {
    throw std::invalid_argument("window too short: fewer than 2 samples per window");
  }
  buffer_.reserve(static_cast<std::size_t>(samples_per_window_));
}

void SlipDetector::reset() {
  buffer_.clear();
  prev_slope_ = 0.0;
  has_last_t_ = false;
}

std::optional<SlipEstimate> SlipDetector::update(double t, double s) {
  if (has_last_t_ && t <= last_t_) {
    throw std::invalid_argument("out-of-order sample: t=" + std::to_string(t) +
                                " after t=" + std::to_string(last_t_));
  }
  last_t_ = t;
  has_last_t_ = true;

  buffer_.emplace_back(t, s);
  if (buffer_.size() < static_cast<std::size_t>(samples_per_window_)) return std::nullopt;

  SlipEstimate est;
  est.slope = window_slope(buffer_);
  est.delta_slope = est.slope - prev_slope_;
  est.window_end_t = t;
  est.severity = std::max(0.0, std::abs(est.delta_slope) / params_.theta_slip - 1.0) +
                 std::max(0.0, std::abs(est.slope) / params_.theta_abs - 1.0);
  est.slipping = est.severity > 0.0;

  prev_slope_ = est.slope;
  buffer_.clear();
  return est;
}

double severity_to_correction(const SlipEstimate& estimate, const SlipParams& params) {
  return std::clamp(params.g_slip * estimate.severity, 0.0, params.theta_max_slip);
}

}  // namespace tgrasp
