#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "tgrasp/hand.hpp"

using namespace tgrasp;

namespace {
constexpr double kEps = 1e-12;
}

TEST_CASE("joint validity: J5 is thumb-only, fingers expose J1..J4") {
  CHECK(joint_valid(Digit::TH, Joint::J5));
  CHECK_FALSE(joint_valid(Digit::FF, Joint::J5));
  const FingerState finger = FingerState::make_finger(Digit::MF);
  CHECK(finger.joint_count() == 4);
  CHECK(finger.has_joint(Joint::J4));
  CHECK_FALSE(finger.has_joint(Joint::J5));
  CHECK_THROWS_AS((void)finger.angle(Joint::J5), std::out_of_range);
  const FingerState thumb = FingerState::make_thumb();
  CHECK(thumb.joint_count() == 5);
  CHECK(thumb.has_joint(Joint::J5));
}

TEST_CASE("finger limits are 0..90 deg on J1..J3") {
  const FingerState f = FingerState::make_finger(Digit::FF);
  for (Joint j : {Joint::J1, Joint::J2, Joint::J3}) {
    CHECK(f.limits(j).min_rad == 0.0);
    CHECK(f.limits(j).max_rad == doctest::Approx(deg2rad(90.0)));
  }
}

TEST_CASE("set_angle clamps into limits") {
  FingerState f = FingerState::make_finger(Digit::RF);
  f.set_angle(Joint::J3, deg2rad(120.0));
  CHECK(f.angle(Joint::J3) == doctest::Approx(deg2rad(90.0)));
  f.set_angle(Joint::J3, -1.0);
  CHECK(f.angle(Joint::J3) == 0.0);
}

TEST_CASE("set_pre_grasp: fingers extended, thumb base at 70 deg") {
  HandState hand;
  hand.digit(Digit::FF).set_angle(Joint::J2, deg2rad(45.0));
  hand.thumb().set_angle(Joint::J4, 0.5);

  const HandState pre = set_pre_grasp(hand);
  for (Digit d : {Digit::FF, Digit::MF, Digit::RF, Digit::LF}) {
    for (Joint j : {Joint::J1, Joint::J2, Joint::J3, Joint::J4}) {
      CHECK(pre.digit(d).angle(j) == 0.0);
    }
  }
  CHECK(pre.thumb().angle(Joint::J5) == doctest::Approx(1.2217).epsilon(1e-4));
  CHECK(pre.thumb().angle(Joint::J4) == 0.0);

  // idempotent
  const HandState again = set_pre_grasp(pre);
  CHECK(hand_distance(pre, again) == 0.0);
}

TEST_CASE("set_pre_grasp preserves enabled flags") {
  HandState hand;
  hand.digit(Digit::RF).enabled = false;
  const HandState pre = set_pre_grasp(hand);
  CHECK_FALSE(pre.digit(Digit::RF).enabled);
}

TEST_CASE("virtual J0 drives J2 below saturation") {
  FingerState f = FingerState::make_finger(Digit::FF);
  f.set_angle(Joint::J2, deg2rad(45.0));
  f = actuate_virtual_j0(f, deg2rad(5.0));
  CHECK(f.angle(Joint::J2) == doctest::Approx(deg2rad(50.0)));
  CHECK(f.angle(Joint::J1) == 0.0);
}

TEST_CASE("virtual J0 hands over to J1 at the J2 stop") {
  FingerState f = FingerState::make_finger(Digit::FF);
  f.set_angle(Joint::J2, deg2rad(90.0));
  f = actuate_virtual_j0(f, deg2rad(5.0));
  CHECK(f.angle(Joint::J1) == doctest::Approx(deg2rad(5.0)));
  CHECK(f.angle(Joint::J2) == doctest::Approx(deg2rad(90.0)));
}

TEST_CASE("virtual J0 zero delta is a no-op") {
  FingerState f = FingerState::make_finger(Digit::LF);
  f.set_angle(Joint::J2, 0.7);
  const FingerState g = actuate_virtual_j0(f, 0.0);
  CHECK(g.angle(Joint::J1) == f.angle(Joint::J1));
  CHECK(g.angle(Joint::J2) == f.angle(Joint::J2));
}

TEST_CASE("virtual J0 rejects negative delta and thumbs") {
  FingerState f = FingerState::make_finger(Digit::FF);
  CHECK_THROWS_AS((void)actuate_virtual_j0(f, -0.1), std::invalid_argument);
  CHECK_THROWS_AS((void)actuate_virtual_j0(FingerState::make_thumb(), 0.1),
                  std::invalid_argument);
}

TEST_CASE("actuate_base: additive update with clamp") {
  FingerState f = FingerState::make_finger(Digit::FF);
  f.set_angle(Joint::J3, deg2rad(10.0));
  f = actuate_base(f, deg2rad(2.0));
  CHECK(f.angle(Joint::J3) == doctest::Approx(deg2rad(12.0)));

  f.set_angle(Joint::J3, deg2rad(89.5));
  f = actuate_base(f, deg2rad(2.0));
  CHECK(f.angle(Joint::J3) == doctest::Approx(deg2rad(90.0)));

  CHECK_THROWS_AS((void)actuate_base(f, -0.01), std::invalid_argument);
}

TEST_CASE("actuate_base on the thumb moves J4, not J3") {
  FingerState thumb = FingerState::make_thumb();
  thumb = actuate_base(thumb, deg2rad(2.0));
  CHECK(thumb.angle(Joint::J4) == doctest::Approx(deg2rad(2.0)));
  CHECK(thumb.angle(Joint::J3) == 0.0);
}

TEST_CASE("fingertip_closure endpoints and linearity") {
  FingerState f = FingerState::make_finger(Digit::FF);
  CHECK(fingertip_closure(f) == 0.0);

  f.set_angle(Joint::J3, deg2rad(45.0));
  CHECK(fingertip_closure(f) == doctest::Approx(1.0 / 6.0).epsilon(1e-9));

  f.set_angle(Joint::J1, deg2rad(90.0));
  f.set_angle(Joint::J2, deg2rad(90.0));
  f.set_angle(Joint::J3, deg2rad(90.0));
  CHECK(fingertip_closure(f) == doctest::Approx(1.0));
}

TEST_CASE("property: random virtual J0 sequences keep the coupling ordered") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> delta(0.0, 0.3);
  for (int trial = 0; trial < 300; ++trial) {
    FingerState f = FingerState::make_finger(Digit::FF);
    double prev_closure = fingertip_closure(f);
    for (int step = 0; step < 60; ++step) {
      const double d = delta(rng);
      const double j2_before = f.angle(Joint::J2);
      const double j1_before = f.angle(Joint::J1);
      f = actuate_virtual_j0(f, d);

      REQUIRE(f.angle(Joint::J2) >= f.angle(Joint::J1));
      REQUIRE(f.angle(Joint::J1) <= f.limits(Joint::J1).max_rad);
      REQUIRE(f.angle(Joint::J2) <= f.limits(Joint::J2).max_rad);
      REQUIRE(f.angle(Joint::J1) + f.angle(Joint::J2) <= deg2rad(180.0) + 1e-12);

      // J1 only moves when the commanded J2 motion would be cut short
      if (f.angle(Joint::J1) > j1_before + kEps) {
        const double room = f.limits(Joint::J2).max_rad - j2_before;
        REQUIRE(room < std::min(d, kDefaultJ2SaturationRad) + kEps);
      }

      const double closure = fingertip_closure(f);
      REQUIRE(closure >= prev_closure - kEps);
      prev_closure = closure;
    }
  }
}
