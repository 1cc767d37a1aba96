#include "tgrasp/hand.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tgrasp {

namespace {

constexpr double kRightAngle = deg2rad(90.0);
constexpr double kFingerAbductionRad = deg2rad(20.0);

double clamp_to(double v, const JointRange& r) {
  return std::clamp(v, r.min_rad, r.max_rad);
}

}  // namespace

const char* digit_name(Digit d) {
  switch (d) {
    case Digit::FF: return "FF";
    case Digit::MF: return "MF";
    case Digit::RF: return "RF";
    case Digit::LF: return "LF";
    case Digit::TH: return "TH";
  }
  return "??";
}

Digit digit_from_name(std::string_view name) {
  for (Digit d : kAllDigits) {
    if (name == digit_name(d)) return d;
  }
  throw std::invalid_argument("unknown digit name: " + std::string(name));
}

bool joint_valid(Digit digit, Joint joint) {
  if (joint == Joint::J5) return digit == Digit::TH;
  return true;
}

FingerState::FingerState(Digit d, int joints) : digit_(d), joint_count_(joints) {
  for (int i = 0; i < joints; ++i) {
    limits_[static_cast<std::size_t>(i)] = JointRange{0.0, kRightAngle};
  }
  if (!is_thumb()) {
    // J4 is the abduction axis; modelled but never commanded.
    limits_[static_cast<std::size_t>(Joint::J4)] =
        JointRange{-kFingerAbductionRad, kFingerAbductionRad};
  }
}

FingerState FingerState::make_finger(Digit d) {
  if (d == Digit::TH) throw std::invalid_argument("make_finger called with TH");
  return FingerState(d, 4);
}

FingerState FingerState::make_thumb() { return FingerState(Digit::TH, 5); }

bool FingerState::has_joint(Joint j) const {
  return static_cast<int>(j) < joint_count_ && joint_valid(digit_, j);
}

double FingerState::angle(Joint j) const {
  if (!has_joint(j)) {
    throw std::out_of_range(std::string("digit ") + digit_name(digit_) +
                            " has no joint J" + std::to_string(static_cast<int>(j) + 1));
  }
  return angles_[static_cast<std::size_t>(j)];
}

JointRange FingerState::limits(Joint j) const {
  if (!has_joint(j)) {
    throw std::out_of_range(std::string("digit ") + digit_name(digit_) +
                            " has no joint J" + std::to_string(static_cast<int>(j) + 1));
  }
  return limits_[static_cast<std::size_t>(j)];
}

void FingerState::set_angle(Joint j, double rad) {
  if (!has_joint(j)) {
    throw std::out_of_range(std::string("digit ") + digit_name(digit_) +
                            " has no joint J" + std::to_string(static_cast<int>(j) + 1));
  }
  angles_[static_cast<std::size_t>(j)] = clamp_to(rad, limits_[static_cast<std::size_t>(j)]);
}

HandState::HandState()
    : digits{FingerState::make_finger(Digit::FF), FingerState::make_finger(Digit::MF),
             FingerState::make_finger(Digit::RF), FingerState::make_finger(Digit::LF),
             FingerState::make_thumb()} {}

HandState set_pre_grasp(HandState hand) {
  for (Digit d : kAllDigits) {
    FingerState& f = hand.digit(d);
    for (int i = 0; i < f.joint_count(); ++i) {
      f.set_angle(static_cast<Joint>(i), 0.0);
    }
  }
  hand.thumb().set_angle(Joint::J5, kThumbPreGraspRad);
  return hand;
}

FingerState actuate_virtual_j0(FingerState finger, double delta_rad, double saturation_rad) {
  if (finger.is_thumb()) {
    throw std::invalid_argument("virtual J0 applies to fingers; the thumb drives J1 directly");
  }
  if (delta_rad < 0.0) throw std::invalid_argument("virtual J0 delta must be non-negative");
  if (delta_rad == 0.0) return finger;

  const double j2 = finger.angle(Joint::J2);
  const double j2_max = finger.limits(Joint::J2).max_rad;
  const double room = j2_max - j2;
  const double achievable = std::min(delta_rad, room);

  if (achievable < std::min(delta_rad, saturation_rad)) {
    // At the J2 stop: absorb the remaining sliver so the pair stays ordered,
    // then hand the full step to J1.
    finger.set_angle(Joint::J2, j2_max);
    finger.set_angle(Joint::J1, finger.angle(Joint::J1) + delta_rad);
  } else {
    finger.set_angle(Joint::J2, j2 + achievable);
  }
  return finger;
}

FingerState actuate_base(FingerState finger, double delta_rad) {
  if (delta_rad < 0.0) throw std::invalid_argument("base joint delta must be non-negative");
  const Joint base = finger.base_joint();
  finger.set_angle(base, finger.angle(base) + delta_rad);
  return finger;
}

FingerState actuate_thumb_j1(FingerState thumb, double delta_rad) {
  if (!thumb.is_thumb()) throw std::invalid_argument("actuate_thumb_j1 called on a finger");
  if (delta_rad < 0.0) throw std::invalid_argument("thumb J1 delta must be non-negative");
  thumb.set_angle(Joint::J1, thumb.angle(Joint::J1) + delta_rad);
  return thumb;
}

double fingertip_closure(const FingerState& finger) {
  const double span = 3.0 * kRightAngle;
  const double sum = finger.angle(Joint::J1) + finger.angle(Joint::J2) +
                     finger.angle(finger.base_joint());
  return sum / span;
}

double hand_distance(const HandState& a, const HandState& b) {
  double worst = 0.0;
  for (Digit d : kAllDigits) {
    const FingerState& fa = a.digit(d);
    const FingerState& fb = b.digit(d);
    for (int i = 0; i < fa.joint_count(); ++i) {
      const Joint j = static_cast<Joint>(i);
      worst = std::max(worst, std::abs(fa.angle(j) - fb.angle(j)));
    }
  }
  return worst;
}

}  // namespace tgrasp
