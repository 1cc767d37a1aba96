#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tgrasp/hand.hpp"

namespace tgrasp {

enum class Shape { sphere, box, cylinder, soft_blob };

const char* shape_name(Shape s);
Shape shape_from_name(const std::string& name);

struct ObjectSpec {
  std::string name;
  Shape shape = Shape::box;
  double mass_kg = 0.3;
  double mu_static = 1.0;
  double mu_kinetic = 0.85;
  double stiffness_n_per_m = 2000.0;  // contact compliance; low = soft
  double size_m = 0.04;               // characteristic radius / half-width

  void validate() const;
};

struct SimConfig {
  double physics_dt = 0.001;
  double control_dt = 0.01;
  double gravity = 9.81;
  std::uint64_t seed = 0;

  void validate() const;
  int substeps() const;
};

struct WorldParams {
  double tip_stiffness = 400.0;    // fingertip pad, N/m
  double base_stiffness = 300.0;   // proximal pad, N/m
  double tip_reach_m = 0.11;       // fingertip travel over full closure
  double tip_aperture_m = 0.18;    // tip-to-object gap is aperture/2 - size
  double base_radius_m = 0.06;     // proximal phalanx lever arm
  double base_aperture_m = 0.13;
  double soft_tau_coeff = 50.0;    // N*s/m; slip low-pass tau = coeff / stiffness
  double grip_span_m = 0.09;       // relative slide beyond this sheds all contact
};

struct DigitContact {
  bool tip_in_contact = false;
  bool base_in_contact = false;
  double tip_force_n = 0.0;
  double base_force_n = 0.0;
  double tip_penetration_m = 0.0;
  double base_penetration_m = 0.0;
};

struct WorldState {
  ObjectSpec object;
  WorldParams params;
  HandState hand;

  double object_z = 0.0;  // height above the resting pose on the table
  double time = 0.0;
  std::array<DigitContact, kNumDigits> contacts{};

  double slip_speed = 0.0;       // relative hand-object speed, >= 0
  double cumulative_slip = 0.0;  // total relative slide, metres
  bool airborne = false;
  bool dropped = false;

  double grip_scale = 1.0;  // scenario hook; scales every contact force

  // integrator internals
  double slip_accel = 0.0;
  double pending_ground_slide = 0.0;

  double sum_normal_force() const;
  double grip_capacity() const;  // mu_static * total normal force
  int enabled_digits() const;
};

WorldState make_world(const ObjectSpec& object, const WorldParams& params = {});

/// Recomputes per-digit contact forces from the current hand pose.
void update_contacts(WorldState& world);

/// One physics_dt: snap the hand to the command, refresh contacts, and
/// integrate the Coulomb slip dynamics (low-pass filtered so soft objects
/// slip more gradually). The palm is treated as stationary here; vertical
/// arm motion goes through raise_arm.
void step(WorldState& world, const HandState& command, const SimConfig& cfg);

/// control_dt worth of physics substeps plus grounded-slide bookkeeping.
void step_control(WorldState& world, const HandState& command, const SimConfig& cfg);

/// Moves the palm up by dz (>= 0). A held object rises with it; a slipping
/// object still rises but loses slip_speed * dt per tick inside step(); a
/// grounded object that the grip cannot carry stays put and slides.
void raise_arm(WorldState& world, double dz, const SimConfig& cfg);

/// Removes a digit from the grasp. The thumb cannot be removed and at least
/// two digits must remain.
void disable_finger(WorldState& world, Digit digit);

/// Scenario hook: rescales all contact forces so the static-friction capacity
/// equals fraction * weight at this instant. Requires existing contact.
void scale_grip_capacity(WorldState& world, double fraction_of_weight, double gravity);

std::vector<ObjectSpec> load_object_dataset(const std::string& path);

}  // namespace tgrasp
