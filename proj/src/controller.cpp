#include "tgrasp/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tgrasp {

const char* phase_name(ControllerPhase p) {
  switch (p) {
    case ControllerPhase::PreGrasp: return "PreGrasp";
    case ControllerPhase::Taring: return "Taring";
    case ControllerPhase::FsrContact: return "FsrContact";
    case ControllerPhase::CoupledClose: return "CoupledClose";
    case ControllerPhase::LiftAndHold: return "LiftAndHold";
    case ControllerPhase::Done: return "Done";
    case ControllerPhase::Failed: return "Failed";
  }
  return "?";
}

ControllerPhase phase_from_name(const std::string& name) {
  for (int i = 0; i < kNumPhases; ++i) {
    if (name == phase_name(static_cast<ControllerPhase>(i))) {
      return static_cast<ControllerPhase>(i);
    }
  }
  throw std::invalid_argument("unknown phase: " + name);
}

const char* failure_reason_name(FailureReason r) {
  switch (r) {
    case FailureReason::none: return "none";
    case FailureReason::dropped: return "dropped";
    case FailureReason::timeout: return "timeout";
    case FailureReason::config: return "config";
  }
  return "?";
}

void EasingParams::validate() const {
  if (!(a1 >= 0.0 && a2 <= 1.0 && a1 < a2)) {
    throw std::invalid_argument("easing: need 0 <= a1 < a2 <= 1");
  }
  if (theta_min < 0.0 || theta_max < theta_min) {
    throw std::invalid_argument("easing: need 0 <= theta_min <= theta_max");
  }
  auto in_range = [&](double b) { return b >= theta_min && b <= theta_max; };
  if (!in_range(b1) || !in_range(b2)) {
    throw std::invalid_argument("easing: b1 and b2 must lie in [theta_min, theta_max]");
  }
}

double bezier_ease(double s_biotac, const EasingParams& p) {
  return s_biotac * s_biotac * (p.kappa1 - p.kappa2 * s_biotac);
}

double control_step_size(double theta_beta, const EasingParams& p) {
  if (p.a1 == p.a2) throw std::invalid_argument("easing: a1 == a2");
  const double clamped = std::clamp(theta_beta, p.a1, p.a2);
  const double u = (clamped - p.a1) / (p.a2 - p.a1);
  return std::lerp(p.b1, p.b2, u);
}

void ControllerConfig::validate() const {
  if (tau_termination <= 0.0) throw std::invalid_argument("tau_termination must be positive");
  if (hold_duration <= 0.0) throw std::invalid_argument("hold_duration must be positive");
  if (fsr_contact_threshold <= 0.0) {
    throw std::invalid_argument("fsr_contact_threshold must be positive");
  }
  if (base_step <= 0.0) throw std::invalid_argument("base_step must be positive");
  if (lift_height <= 0.0 || lift_step <= 0.0) {
    throw std::invalid_argument("lift_height and lift_step must be positive");
  }
  if (tare_samples < 2) throw std::invalid_argument("tare_samples must be >= 2");
  if (baseline_window <= 0.0) throw std::invalid_argument("baseline_window must be positive");
  if (drop_threshold_m <= 0.0) throw std::invalid_argument("drop_threshold_m must be positive");
  if (time_budget_s <= 0.0) throw std::invalid_argument("time_budget_s must be positive");
  easing.validate();
  slip.validate();
}

GraspController::GraspController(const ControllerConfig& cfg, double control_dt)
    : cfg_(cfg), control_dt_(control_dt) {
  cfg_.validate();
  for (std::size_t d = 0; d < kNumDigits; ++d) {
    detectors_.emplace_back(cfg_.slip, control_dt);
    tare_buffer_[d].reserve(static_cast<std::size_t>(cfg_.tare_samples));
  }
}

void GraspController::fail(FailureReason reason) {
  if (phase_ == ControllerPhase::Done || phase_ == ControllerPhase::Failed) return;
  failure_reason_ = reason;
  phase_ = ControllerPhase::Failed;
}

void GraspController::enter(ControllerPhase p) { phase_ = p; }

bool GraspController::digit_slipping(Digit d) const {
  const auto& est = estimates_[static_cast<std::size_t>(d)];
  return est.has_value() && est->slipping;
}

bool GraspController::hand_slipping() const {
  for (Digit d : kAllDigits) {
    if (digit_slipping(d)) return true;
  }
  return false;
}

const std::optional<SlipEstimate>& GraspController::last_estimate(Digit d) const {
  return estimates_[static_cast<std::size_t>(d)];
}

const Baseline& GraspController::baseline(Digit d) const {
  return baselines_[static_cast<std::size_t>(d)];
}

double GraspController::last_pressure_delta(Digit d) const {
  return last_p_delta_[static_cast<std::size_t>(d)];
}

GraspController::TickResult GraspController::tick(const RawFrame& frame,
                                                  const HandState& hand) {
  if (has_last_t_ && frame.t <= last_t_) {
    throw std::invalid_argument("controller frames out of order");
  }
  last_t_ = frame.t;
  has_last_t_ = true;

  // Normalized view of the stream, available once taring is done.
  last_frame_.t = frame.t;
  for (std::size_t d = 0; d < kNumDigits; ++d) {
    const auto& raw = frame.digits[d];
    last_frame_.digits[d].fsr_n = cfg_.fsr_calibration.predict(raw.fsr_counts);
    last_frame_.digits[d].s_biotac =
        tared_ ? normalize(RawBiotacSample{raw.p_dc, frame.t}, baselines_[d]) : 0.0;
    last_p_delta_[d] = has_prev_p_ ? raw.p_dc - prev_p_dc_[d] : 0.0;
    prev_p_dc_[d] = raw.p_dc;
  }
  has_prev_p_ = true;

  if (phase_ == ControllerPhase::Done || phase_ == ControllerPhase::Failed) {
    return {hand, phase_};
  }

  HandState command = hand;
  switch (phase_) {
    case ControllerPhase::PreGrasp:
      command = tick_pre_grasp(hand);
      break;
    case ControllerPhase::Taring:
      command = tick_taring(frame, hand);
      break;
    case ControllerPhase::FsrContact:
      command = tick_fsr_contact(hand);
      break;
    case ControllerPhase::CoupledClose:
      command = tick_coupled_close(hand);
      break;
    case ControllerPhase::LiftAndHold:
      command = tick_lift_and_hold(hand);
      break;
    default:
      break;
  }
  return {command, phase_};
}

HandState GraspController::tick_pre_grasp(const HandState& hand) {
  HandState target = set_pre_grasp(hand);
  if (hand_distance(hand, target) < 1e-9) {
    enter(ControllerPhase::Taring);
  }
  return target;
}

HandState GraspController::tick_taring(const RawFrame& frame, const HandState& hand) {
  for (std::size_t d = 0; d < kNumDigits; ++d) {
    tare_buffer_[d].push_back(RawBiotacSample{frame.digits[d].p_dc, frame.t});
  }
  if (tare_buffer_[0].size() >= static_cast<std::size_t>(cfg_.tare_samples)) {
    for (std::size_t d = 0; d < kNumDigits; ++d) {
      baselines_[d] = tare(tare_buffer_[d], cfg_.tare_samples, cfg_.baseline_window);
      tare_buffer_[d].clear();
    }
    tared_ = true;
    enter(ControllerPhase::FsrContact);
  }
  return hand;  // hold still while taring
}

HandState GraspController::tick_fsr_contact(const HandState& hand) {
  HandState command = hand;
  bool all_contacted = true;
  for (Digit d : kAllDigits) {
    const std::size_t i = static_cast<std::size_t>(d);
    if (!hand.digit(d).enabled) continue;
    if (fsr_contacted_[i]) continue;
    if (last_frame_.digits[i].fsr_n >= cfg_.fsr_contact_threshold) {
      fsr_contacted_[i] = true;
      continue;
    }
    all_contacted = false;
    command.digit(d) = actuate_base(command.digit(d), cfg_.base_step);
  }
  if (all_contacted) {
    enter(ControllerPhase::CoupledClose);
  }
  return command;
}

HandState GraspController::tick_coupled_close(const HandState& hand) {
  HandState command = hand;
  bool all_done = true;
  for (Digit d : kAllDigits) {
    const std::size_t i = static_cast<std::size_t>(d);
    if (!hand.digit(d).enabled) continue;
    if (close_terminated_[i]) continue;

    const double s = last_frame_.digits[i].s_biotac;
    if (s >= cfg_.tau_termination) {  // minimal fingertip contact reached
      close_terminated_[i] = true;
      continue;
    }

    FingerState& f = command.digit(d);
    const double j1j2 = f.angle(Joint::J1) + f.angle(Joint::J2);
    if (j1j2 >= deg2rad(180.0) - 1e-9) {  // out of closure range
      close_terminated_[i] = true;
      continue;
    }

    const double theta_beta = bezier_ease(s, cfg_.easing);
    const double delta = control_step_size(theta_beta, cfg_.easing);
    if (f.is_thumb()) {
      f = actuate_thumb_j1(f, delta);
      if (f.angle(Joint::J1) >= f.limits(Joint::J1).max_rad - 1e-9) {
        close_terminated_[i] = true;
      }
    } else {
      f = actuate_virtual_j0(f, delta, cfg_.j2_saturation_rad);
    }
    all_done = false;
  }

  if (all_done) {
    lift_target_z_ = hand.palm_z + cfg_.lift_height;
    lift_complete_ = false;
    hold_elapsed_ = 0.0;
    for (auto& det : detectors_) det.reset();
    estimates_.fill(std::nullopt);
    enter(ControllerPhase::LiftAndHold);
  }
  return command;
}

void GraspController::apply_correction(FingerState& finger, double delta) const {
  if (delta <= 0.0) return;
  if (finger.is_thumb()) {
    finger = actuate_thumb_j1(finger, delta);
    return;
  }
  // Tighten via J1 while the coupling allows it; any remainder drives the
  // virtual J0 so the pair ratchets closed without J1 overtaking J2.
  const double j1 = finger.angle(Joint::J1);
  const double headroom = std::min(finger.angle(Joint::J2) - j1,
                                   finger.limits(Joint::J1).max_rad - j1);
  const double direct = std::clamp(headroom, 0.0, delta);
  if (direct > 0.0) finger.set_angle(Joint::J1, j1 + direct);
  const double rest = delta - direct;
  if (rest > 0.0) finger = actuate_virtual_j0(finger, rest, cfg_.j2_saturation_rad);
}

HandState GraspController::tick_lift_and_hold(const HandState& hand) {
  HandState command = hand;

  if (lift_complete_ && hold_elapsed_ >= cfg_.hold_duration) {
    enter(ControllerPhase::Done);  // pure transition tick, no actuation
    return command;
  }

  for (Digit d : kAllDigits) {
    const std::size_t i = static_cast<std::size_t>(d);
    if (!hand.digit(d).enabled) {
      estimates_[i].reset();  // removed digits stop reporting slip
      continue;
    }
    if (auto est = detectors_[i].update(last_frame_.t, last_frame_.digits[i].s_biotac)) {
      estimates_[i] = est;
    }
  }

  if (cfg_.slip_comp_enabled) {
    for (Digit d : kAllDigits) {
      const std::size_t i = static_cast<std::size_t>(d);
      if (!hand.digit(d).enabled) continue;
      if (!estimates_[i] || !estimates_[i]->slipping) continue;
      apply_correction(command.digit(d), severity_to_correction(*estimates_[i], cfg_.slip));
    }
  }

  if (command.palm_z < lift_target_z_) {
    command.palm_z = std::min(command.palm_z + cfg_.lift_step, lift_target_z_);
  } else {
    lift_complete_ = true;
    hold_elapsed_ += control_dt_;
  }
  return command;
}

TrialResult run_grasp(WorldState world, const FullConfig& cfg, const TrialOptions& options) {
  cfg.sim.validate();

  TrialResult result;
  result.object_name = world.object.name;
  result.seed = cfg.sim.seed;

  ControllerConfig ctrl_cfg = cfg.controller;
  ctrl_cfg.slip_comp_enabled = ctrl_cfg.slip_comp_enabled && options.slip_comp_enabled;

  GraspController controller(ctrl_cfg, cfg.sim.control_dt);
  SensorRig rig(cfg.sensors, cfg.sim.seed);

  bool capacity_scripted = options.script_capacity_fraction <= 0.0;
  bool drop_applied = !options.drop_fingers.has_value();

  while (true) {
    const RawFrame frame = rig.sample(world);
    const auto [command, phase] = controller.tick(frame, world.hand);
    if (phase == ControllerPhase::Done || phase == ControllerPhase::Failed) break;

    if (world.time >= ctrl_cfg.time_budget_s) {
      controller.fail(FailureReason::timeout);
      break;
    }
    result.phase_durations[static_cast<std::size_t>(phase)] += cfg.sim.control_dt;

    if (!capacity_scripted && phase == ControllerPhase::LiftAndHold) {
      scale_grip_capacity(world, options.script_capacity_fraction, cfg.sim.gravity);
      capacity_scripted = true;
    }
    if (!drop_applied && world.time >= options.drop_fingers->at_time_s) {
      for (Digit d : options.drop_fingers->digits) disable_finger(world, d);
      drop_applied = true;
    }

    const double rise = command.palm_z - world.hand.palm_z;
    if (rise > 0.0) raise_arm(world, rise, cfg.sim);
    step_control(world, command, cfg.sim);

    result.peak_grip_force_n = std::max(result.peak_grip_force_n, world.sum_normal_force());

    TraceRow row;
    row.t = frame.t;
    row.phase = phase;
    for (std::size_t d = 0; d < kNumDigits; ++d) {
      const FingerState& f = world.hand.digits[d];
      row.digits[d].s_biotac = controller.last_frame().digits[d].s_biotac;
      row.digits[d].fsr_n = controller.last_frame().digits[d].fsr_n;
      row.digits[d].j1_rad = f.angle(Joint::J1);
      row.digits[d].j2_rad = f.angle(Joint::J2);
      row.digits[d].j3_rad = f.angle(Joint::J3);
    }
    row.palm_z_m = world.hand.palm_z;
    row.object_z_m = world.object_z;
    row.slip_speed_mps = world.slip_speed;
    row.slip_flag = controller.hand_slipping();
    result.trace.push_back(row);

    // Failure conditions live in the world, not in the tactile stream.
    if (world.dropped || world.cumulative_slip > ctrl_cfg.drop_threshold_m) {
      controller.fail(FailureReason::dropped);
    }
  }

  result.success = controller.phase() == ControllerPhase::Done;
  result.failure_reason = controller.failure_reason();
  result.total_slip_m = world.cumulative_slip;
  result.duration_s = static_cast<double>(result.trace.size()) * cfg.sim.control_dt;
  return result;
}

}  // namespace tgrasp
