#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace tgrasp {

enum class Digit : std::uint8_t { FF = 0, MF = 1, RF = 2, LF = 3, TH = 4 };

inline constexpr std::size_t kNumDigits = 5;
inline constexpr std::array<Digit, kNumDigits> kAllDigits = {
    Digit::FF, Digit::MF, Digit::RF, Digit::LF, Digit::TH};

const char* digit_name(Digit d);
Digit digit_from_name(std::string_view name);

enum class Joint : std::uint8_t { J1 = 0, J2 = 1, J3 = 2, J4 = 3, J5 = 4 };

struct JointId {
  Digit digit;
  Joint joint;
};

/// Fingers expose J1..J4, the thumb J1..J5.
bool joint_valid(Digit digit, Joint joint);

struct JointRange {
  double min_rad = 0.0;
  double max_rad = 0.0;
};

inline constexpr double deg2rad(double deg) { return deg * 0.017453292519943295; }

inline constexpr double kThumbPreGraspRad = deg2rad(70.0);

/// Commanded closure motion below this angle counts as the coupled joint
/// being at its stop, which hands the motion over to the distal joint.
inline constexpr double kDefaultJ2SaturationRad = 0.1;

/// Joint-space state of one digit. Angles are clamped into the per-joint
/// limits on every write; fingers keep J1/J2 coupled through the actuation
/// helpers below rather than through this container.
class FingerState {
 public:
  static FingerState make_finger(Digit d);
  static FingerState make_thumb();

  Digit digit() const { return digit_; }
  bool is_thumb() const { return digit_ == Digit::TH; }
  int joint_count() const { return joint_count_; }
  bool has_joint(Joint j) const;

  double angle(Joint j) const;
  JointRange limits(Joint j) const;
  void set_angle(Joint j, double rad);  // clamps into limits

  /// The joint driven during contact seeking: J3 for fingers, J4 for the thumb.
  Joint base_joint() const { return is_thumb() ? Joint::J4 : Joint::J3; }

  bool enabled = true;

 private:
  FingerState(Digit d, int joints);

  Digit digit_;
  int joint_count_;
  std::array<double, 5> angles_{};
  std::array<JointRange, 5> limits_{};
};

struct HandState {
  HandState();

  std::array<FingerState, kNumDigits> digits;
  double palm_z = 0.0;  // vertical arm pose, metres

  FingerState& digit(Digit d) { return digits[static_cast<std::size_t>(d)]; }
  const FingerState& digit(Digit d) const { return digits[static_cast<std::size_t>(d)]; }
  FingerState& thumb() { return digit(Digit::TH); }
  const FingerState& thumb() const { return digit(Digit::TH); }
};

/// Fingers fully extended, thumb bent at the base to 70 degrees. Idempotent;
/// preserves enabled flags and palm height.
HandState set_pre_grasp(HandState hand);

/// Drives the coupled J1/J2 pair as one virtual joint: J2 until it saturates,
/// then J1. Saturation is detected at runtime as the commanded motion
/// producing less than min(delta, saturation_rad) of J2 change. Fingers only.
FingerState actuate_virtual_j0(FingerState finger, double delta_rad,
                               double saturation_rad = kDefaultJ2SaturationRad);

/// Advances the base joint (J3, thumb J4) by delta, clamped to its limit.
FingerState actuate_base(FingerState finger, double delta_rad);

/// Thumb distal closure; the thumb pair is not coupled.
FingerState actuate_thumb_j1(FingerState thumb, double delta_rad);

/// Scalar closure proxy in [0,1]: (J1 + J2 + base) / 270 deg, where base is
/// J3 for fingers and J4 for the thumb. Strictly monotone in each term.
double fingertip_closure(const FingerState& finger);

/// Max joint-angle difference between two hands (pose distance, radians).
double hand_distance(const HandState& a, const HandState& b);

}  // namespace tgrasp
