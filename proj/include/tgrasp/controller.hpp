#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tgrasp/hand.hpp"
#include "tgrasp/sensors.hpp"
#include "tgrasp/slip.hpp"
#include "tgrasp/world.hpp"

namespace tgrasp {

enum class ControllerPhase : int {
  PreGrasp = 0,
  Taring = 1,
  FsrContact = 2,
  CoupledClose = 3,
  LiftAndHold = 4,
  Done = 5,
  Failed = 6,
};

inline constexpr int kNumPhases = 7;

const char* phase_name(ControllerPhase p);
ControllerPhase phase_from_name(const std::string& name);

enum class FailureReason { none, dropped, timeout, config };
const char* failure_reason_name(FailureReason r);

/// Easing curve parameters. The cubic theta_beta = s^2 * (kappa1 - kappa2 * s)
/// maps normalized pressure onto [a1, a2], which an affine map turns into a
/// step size between b1 and b2. With b1 = theta_max and b2 = theta_min the
/// step shrinks as contact firms up.
struct EasingParams {
  double kappa1 = 3.0;
  double kappa2 = 2.0;
  double a1 = 0.0;
  double a2 = 1.0;
  double b1 = 0.05;
  double b2 = 0.005;
  double theta_min = 0.005;
  double theta_max = 0.05;

  void validate() const;
};

double bezier_ease(double s_biotac, const EasingParams& p);
double control_step_size(double theta_beta, const EasingParams& p);

struct ControllerConfig {
  double tau_termination = 0.1;        // normalized pressure rise ending a digit's closure
  double fsr_contact_threshold = 0.5;  // newtons
  double base_step = 0.02;             // rad per tick while seeking base contact
  double hold_duration = 10.0;         // seconds of suspension after the lift
  double lift_height = 0.15;           // metres
  double lift_step = 0.0005;           // metres per control tick
  EasingParams easing;
  SlipParams slip;
  double j2_saturation_rad = kDefaultJ2SaturationRad;
  double drop_threshold_m = 0.03;      // cumulative slip beyond this fails the trial
  int tare_samples = 50;
  double baseline_window = 200.0;      // counts
  double time_budget_s = 60.0;         // simulated seconds before timing out
  bool slip_comp_enabled = true;
  FsrCalibration fsr_calibration;

  void validate() const;
};

/// Phase state machine: tare, seek base contact on the FSRs, close the
/// coupled joints with eased steps until light fingertip contact, then lift
/// while feeding per-digit slip detectors and tightening slipping digits.
class GraspController {
 public:
  GraspController(const ControllerConfig& cfg, double control_dt);

  struct TickResult {
    HandState command;
    ControllerPhase phase;
  };

  /// One control tick. Frames must arrive in time order.
  TickResult tick(const RawFrame& frame, const HandState& hand);

  /// External failure signal (drop or timeout observed by the harness).
  void fail(FailureReason reason);

  ControllerPhase phase() const { return phase_; }
  FailureReason failure_reason() const { return failure_reason_; }

  /// Normalized view of the last frame (zeros until taring completes).
  const TactileFrame& last_frame() const { return last_frame_; }

  bool digit_slipping(Digit d) const;
  bool hand_slipping() const;  // OR over contacting digits
  const std::optional<SlipEstimate>& last_estimate(Digit d) const;
  const Baseline& baseline(Digit d) const;
  bool tared() const { return tared_; }
  double last_pressure_delta(Digit d) const;  // per-frame raw diff, diagnostics

 private:
  void enter(ControllerPhase p);
  HandState tick_pre_grasp(const HandState& hand);
  HandState tick_taring(const RawFrame& frame, const HandState& hand);
  HandState tick_fsr_contact(const HandState& hand);
  HandState tick_coupled_close(const HandState& hand);
  HandState tick_lift_and_hold(const HandState& hand);
  void apply_correction(FingerState& finger, double delta) const;

  ControllerConfig cfg_;
  double control_dt_;
  ControllerPhase phase_ = ControllerPhase::PreGrasp;
  FailureReason failure_reason_ = FailureReason::none;

  std::array<std::vector<RawBiotacSample>, kNumDigits> tare_buffer_;
  std::array<Baseline, kNumDigits> baselines_{};
  bool tared_ = false;

  TactileFrame last_frame_{};
  std::array<double, kNumDigits> prev_p_dc_{};
  std::array<double, kNumDigits> last_p_delta_{};
  bool has_prev_p_ = false;

  std::array<bool, kNumDigits> fsr_contacted_{};
  std::array<bool, kNumDigits> close_terminated_{};

  std::vector<SlipDetector> detectors_;
  std::array<std::optional<SlipEstimate>, kNumDigits> estimates_{};

  double lift_target_z_ = 0.0;
  bool lift_complete_ = false;
  double hold_elapsed_ = 0.0;

  double last_t_ = 0.0;
  bool has_last_t_ = false;
};

struct DigitTrace {
  double s_biotac = 0.0;
  double fsr_n = 0.0;
  double j1_rad = 0.0;
  double j2_rad = 0.0;
  double j3_rad = 0.0;
};

struct TraceRow {
  double t = 0.0;
  ControllerPhase phase = ControllerPhase::PreGrasp;
  std::array<DigitTrace, kNumDigits> digits{};
  double palm_z_m = 0.0;
  double object_z_m = 0.0;
  double slip_speed_mps = 0.0;
  bool slip_flag = false;
};

struct FingerDropEvent {
  std::vector<Digit> digits;
  double at_time_s = 0.0;
};

struct TrialOptions {
  bool slip_comp_enabled = true;
  std::optional<FingerDropEvent> drop_fingers;
  double script_capacity_fraction = 0.0;  // 0 disables the lift-start capacity script
};

struct TrialResult {
  std::string object_name;
  std::uint64_t seed = 0;
  bool success = false;
  FailureReason failure_reason = FailureReason::none;
  std::array<double, kNumPhases> phase_durations{};  // seconds, indexed by phase
  double total_slip_m = 0.0;
  double peak_grip_force_n = 0.0;
  double duration_s = 0.0;
  std::string trace_path;
  std::vector<TraceRow> trace;
};

struct FullConfig {
  SimConfig sim;
  ControllerConfig controller;
  SensorParams sensors;
  WorldParams world;
};

/// Drives controller and world to termination and records the full trace.
TrialResult run_grasp(WorldState world, const FullConfig& cfg,
                      const TrialOptions& options = {});

}  // namespace tgrasp
