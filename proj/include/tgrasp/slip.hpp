#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace tgrasp {

struct SlipParams {
  double window_s = 0.1;        // non-overlapping regression window
  double theta_slip = 0.5;      // threshold on |delta slope|, 1/s
  double theta_abs = 0.35;      // guard on |slope| itself; catches steady slides
  double g_slip = 0.02;         // rad of correction per unit severity
  double theta_max_slip = 0.1;  // correction cap, rad

  void validate() const;
};

struct SlipEstimate {
  double slope = 0.0;        // OLS slope of s_biotac over the window, 1/s
  double delta_slope = 0.0;  // change from the previous window's slope
  double severity = 0.0;     // >= 0; 0 iff not slipping
  bool slipping = false;
  double window_end_t = 0.0;
};

/// Ordinary least-squares slope of s against t. Exact for collinear input.
double window_slope(std::span<const std::pair<double, double>> samples);

/// Per-digit detector. Buffers one 100 ms window of normalized readings and
/// emits an estimate when the window completes; windows are contiguous and
/// never overlap. The slope before the first window is taken as zero.
class SlipDetector {
 public:
  SlipDetector(const SlipParams& params, double sample_dt);

  /// Feed one sample; returns an estimate when a window closes.
  /// Throws if t does not advance.
  std::optional<SlipEstimate> update(double t, double s);

  void reset();
  const SlipParams& params() const { return params_; }
  int samples_per_window() const { return samples_per_window_; }

 private:
  SlipParams params_;
  int samples_per_window_;
  std::vector<std::pair<double, double>> buffer_;
  double prev_slope_ = 0.0;
  double last_t_ = 0.0;
  bool has_last_t_ = false;
};

/// Corrective joint increment: clamp(g_slip * severity, 0, theta_max_slip).
double severity_to_correction(const SlipEstimate& estimate, const SlipParams& params);

}  // namespace tgrasp
