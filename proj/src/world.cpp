#include "tgrasp/world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace tgrasp {

const char* shape_name(Shape s) {
  switch (s) {
    case Shape::sphere: return "sphere";
    case Shape::box: return "box";
    case Shape::cylinder: return "cylinder";
    case Shape::soft_blob: return "soft_blob";
  }
  return "?";
}

Shape shape_from_name(const std::string& name) {
  if (name == "sphere") return Shape::sphere;
  if (name == "box") return Shape::box;
  if (name == "cylinder") return Shape::cylinder;
  if (name == "soft_blob") return Shape::soft_blob;
  throw std::invalid_argument("unknown shape: " + name);
}

void ObjectSpec::validate() const {
  if (mass_kg <= 0.0) throw std::invalid_argument(name + ": mass must be positive");
  if (mu_kinetic <= 0.0 || mu_kinetic > mu_static) {
    throw std::invalid_argument(name + ": need 0 < mu_kinetic <= mu_static");
  }
  if (stiffness_n_per_m <= 0.0) throw std::invalid_argument(name + ": stiffness must be positive");
  if (size_m <= 0.0) throw std::invalid_argument(name + ": size must be positive");
}

void SimConfig::validate() const {
  if (physics_dt <= 0.0 || control_dt <= 0.0) {
    throw std::invalid_argument("time steps must be positive");
  }
  if (physics_dt > control_dt) {
    throw std::invalid_argument("physics_dt must not exceed control_dt");
  }
  const double ratio = control_dt / physics_dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9) {
    throw std::invalid_argument("control_dt must be a multiple of physics_dt");
  }
  const double windows = 0.1 / control_dt;
  if (std::abs(windows - std::round(windows)) > 1e-9) {
    throw std::invalid_argument("control_dt must divide the 100 ms slip window evenly");
  }
  if (gravity < 0.0) throw std::invalid_argument("gravity must be non-negative");
}

int SimConfig::substeps() const {
  return static_cast<int>(std::llround(control_dt / physics_dt));
}

double WorldState::sum_normal_force() const {
  double sum = 0.0;
  for (const auto& c : contacts) sum += c.tip_force_n + c.base_force_n;
  return sum;
}

double WorldState::grip_capacity() const { return object.mu_static * sum_normal_force(); }

int WorldState::enabled_digits() const {
  int n = 0;
  for (Digit d : kAllDigits) {
    if (hand.digit(d).enabled) ++n;
  }
  return n;
}

WorldState make_world(const ObjectSpec& object, const WorldParams& params) {
  object.validate();
  WorldState w;
  w.object = object;
  w.params = params;
  w.hand = HandState{};
  update_contacts(w);
  return w;
}

void update_contacts(WorldState& world) {
  const ObjectSpec& obj = world.object;
  const WorldParams& p = world.params;

  if (world.dropped) {
    world.contacts.fill(DigitContact{});
    return;
  }

  const double tip_gap = std::max(0.0, 0.5 * p.tip_aperture_m - obj.size_m);
  const double base_gap = std::max(0.0, 0.5 * p.base_aperture_m - obj.size_m);
  const double k_tip = std::min(obj.stiffness_n_per_m, p.tip_stiffness);
  const double k_base = std::min(obj.stiffness_n_per_m, p.base_stiffness);

  for (std::size_t i = 0; i < kNumDigits; ++i) {
    const FingerState& f = world.hand.digits[i];
    DigitContact c;
    if (f.enabled) {
      const double tip_travel = fingertip_closure(f) * p.tip_reach_m;
      c.tip_penetration_m = std::max(0.0, tip_travel - tip_gap);
      c.tip_force_n = world.grip_scale * k_tip * c.tip_penetration_m;
      c.tip_in_contact = c.tip_penetration_m > 0.0;

      const double base_travel = f.angle(f.base_joint()) * p.base_radius_m;
      c.base_penetration_m = std::max(0.0, base_travel - base_gap);
      c.base_force_n = world.grip_scale * k_base * c.base_penetration_m;
      c.base_in_contact = c.base_penetration_m > 0.0;
    }
    world.contacts[i] = c;
  }
}

namespace {

void apply_command(WorldState& world, const HandState& command) {
  // Position servo: targets are reached within the step. Enabled flags are
  // owned by the world, so only joint angles and palm height are taken.
  for (Digit d : kAllDigits) {
    FingerState& cur = world.hand.digit(d);
    if (!cur.enabled) continue;
    const FingerState& tgt = command.digit(d);
    for (int j = 0; j < cur.joint_count(); ++j) {
      cur.set_angle(static_cast<Joint>(j), tgt.angle(static_cast<Joint>(j)));
    }
  }
}

}  // namespace

void step(WorldState& world, const HandState& command, const SimConfig& cfg) {
  const double dt = cfg.physics_dt;
  apply_command(world, command);
  update_contacts(world);

  if (world.dropped) {
    // Free fall until the table stops it.
    world.slip_speed += cfg.gravity * dt;
    world.object_z = std::max(0.0, world.object_z - world.slip_speed * dt);
    if (world.object_z == 0.0) world.slip_speed = 0.0;
    world.time += dt;
    return;
  }

  const double weight = world.object.mass_kg * cfg.gravity;
  const double total_force = world.sum_normal_force();
  const double capacity = world.object.mu_static * total_force;

  if (world.airborne) {
    if (capacity >= weight && world.slip_speed == 0.0) {
      // Static hold; keep the state exactly constant.
      world.slip_accel = 0.0;
    } else {
      // Kinetic regime. The acceleration responds through a first-order lag
      // whose time constant scales with object compliance, so soft objects
      // pick up (and shed) slip gradually.
      const double target =
          cfg.gravity - world.object.mu_kinetic * total_force / world.object.mass_kg;
      const double tau = world.params.soft_tau_coeff / world.object.stiffness_n_per_m;
      const double alpha = std::min(1.0, dt / tau);
      world.slip_accel += (target - world.slip_accel) * alpha;

      double v = world.slip_speed + world.slip_accel * dt;
      if (v <= 0.0) {
        v = 0.0;
        world.slip_accel = std::min(world.slip_accel, 0.0);
      }
      world.slip_speed = v;

      const double fall = v * dt;
      world.object_z -= fall;
      world.cumulative_slip += fall;

      if (world.object_z <= 0.0) {  // landed back on the table
        world.object_z = 0.0;
        world.airborne = false;
        world.slip_speed = 0.0;
        world.slip_accel = 0.0;
      }
      if (world.cumulative_slip > world.params.grip_span_m) {
        world.dropped = true;
        update_contacts(world);
      }
    }
  }

  world.time += dt;
}

void step_control(WorldState& world, const HandState& command, const SimConfig& cfg) {
  const double slide = world.pending_ground_slide;
  world.pending_ground_slide = 0.0;

  const int n = cfg.substeps();
  for (int i = 0; i < n; ++i) step(world, command, cfg);

  if (!world.airborne && !world.dropped) {
    // Relative slide rate while the hand moves around a grounded object.
    world.slip_speed = slide / cfg.control_dt;
  }
}

void raise_arm(WorldState& world, double dz, const SimConfig& cfg) {
  if (dz < 0.0) throw std::invalid_argument("raise_arm: lowering is not supported");
  if (dz == 0.0) return;

  world.hand.palm_z += dz;
  if (world.dropped) return;

  update_contacts(world);
  const double weight = world.object.mass_kg * cfg.gravity;
  const bool can_carry = world.grip_capacity() >= weight && world.sum_normal_force() > 0.0;

  if (world.airborne) {
    // Friction drags the object along; slip is subtracted during step().
    world.object_z += dz;
  } else if (can_carry) {
    world.object_z += dz;
    world.airborne = world.object_z > 0.0;
  } else {
    // Hand slides up around the grounded object.
    world.cumulative_slip += dz;
    world.pending_ground_slide += dz;
    if (world.cumulative_slip > world.params.grip_span_m) {
      world.dropped = true;
      update_contacts(world);
    }
  }
}

void disable_finger(WorldState& world, Digit digit) {
  if (digit == Digit::TH) {
    throw std::invalid_argument("the thumb cannot be removed from the grasp");
  }
  FingerState& f = world.hand.digit(digit);
  if (!f.enabled) {
    throw std::invalid_argument(std::string(digit_name(digit)) + " is already disabled");
  }
  if (world.enabled_digits() <= 2) {
    throw std::invalid_argument("a two-surface pinch is the minimum grasp");
  }
  f.enabled = false;
  update_contacts(world);
}

void scale_grip_capacity(WorldState& world, double fraction_of_weight, double gravity) {
  if (fraction_of_weight <= 0.0) throw std::invalid_argument("fraction must be positive");
  update_contacts(world);
  const double capacity = world.grip_capacity();
  if (capacity <= 0.0) {
    throw std::logic_error("cannot scale grip capacity without contact");
  }
  const double weight = world.object.mass_kg * gravity;
  world.grip_scale *= fraction_of_weight * weight / capacity;
  update_contacts(world);
}

std::vector<ObjectSpec> load_object_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open object dataset: " + path);

  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed object dataset " + path + ": " + e.what());
  }

  const auto& list = doc.contains("objects") ? doc.at("objects") : doc;
  if (!list.is_array() || list.empty()) {
    throw std::runtime_error("object dataset is empty: " + path);
  }

  std::vector<ObjectSpec> objects;
  for (const auto& item : list) {
    ObjectSpec o;
    o.name = item.at("name").get<std::string>();
    o.shape = shape_from_name(item.at("shape").get<std::string>());
    o.mass_kg = item.at("mass_kg").get<double>();
    o.mu_static = item.at("mu_static").get<double>();
    o.mu_kinetic = item.at("mu_kinetic").get<double>();
    o.stiffness_n_per_m = item.at("stiffness_n_per_m").get<double>();
    o.size_m = item.at("size_m").get<double>();
    o.validate();
    objects.push_back(std::move(o));
  }
  return objects;
}

}  // namespace tgrasp
