#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "tgrasp/sensors.hpp"
#include "tgrasp/slip.hpp"
#include "tgrasp/world.hpp"

using namespace tgrasp;

TEST_CASE("window_slope: collinear points give the exact slope") {
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i < 10; ++i) {
    const double t = 0.01 * i;
    samples.emplace_back(t, 2.0 * t + 1.0);
  }
  CHECK(window_slope(samples) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("window_slope: flat signal") {
  std::vector<std::pair<double, double>> samples{{0.0, 0.7}, {0.01, 0.7}, {0.02, 0.7}};
  CHECK(window_slope(samples) == 0.0);
}

TEST_CASE("window_slope: degenerate input") {
  CHECK_THROWS_AS((void)window_slope(std::vector<std::pair<double, double>>{{0.0, 1.0}}),
                  std::invalid_argument);
  std::vector<std::pair<double, double>> same_t{{0.5, 1.0}, {0.5, 2.0}};
  CHECK_THROWS_AS((void)window_slope(same_t), std::invalid_argument);
}

TEST_CASE("window_slope agrees with a direct normal-equation oracle") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> count(2, 60);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = count(rng);
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i < n; ++i) samples.emplace_back(0.01 * i + 0.003 * val(rng), val(rng));

    // normal equations, solved directly in long double
    long double st = 0, ss = 0, stt = 0, sts = 0;
    for (const auto& [t, s] : samples) {
      st += t;
      ss += s;
      stt += (long double)t * t;
      sts += (long double)t * s;
    }
    const long double denom = n * stt - st * st;
    const double oracle = static_cast<double>((n * sts - st * ss) / denom);
    REQUIRE(window_slope(samples) == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("detector: two flat windows do not report slip") {
  SlipParams p;
  SlipDetector det(p, 0.01);
  int estimates = 0;
  for (int k = 0; k < 20; ++k) {
    if (auto est = det.update(0.01 * k, 0.3)) {
      ++estimates;
      CHECK(est->slope == doctest::Approx(0.0));
      CHECK(est->delta_slope == doctest::Approx(0.0));
      CHECK_FALSE(est->slipping);
      CHECK(est->severity == 0.0);
    }
  }
  CHECK(estimates == 2);
}

TEST_CASE("detector: slope jump 0 to 0.8 at theta_slip 0.2 gives severity 3") {
  SlipParams p;
  p.theta_slip = 0.2;
  p.theta_abs = 1.0;  // keep the absolute guard quiet in this scenario
  SlipDetector det(p, 0.01);

  std::optional<SlipEstimate> second;
  for (int k = 0; k < 20; ++k) {
    const double t = 0.01 * k;
    const double s = (k < 10) ? 0.2 : 0.2 + 0.8 * (t - 0.1);
    if (auto est = det.update(t, s)) second = est;
  }
  REQUIRE(second.has_value());
  CHECK(second->slope == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(second->delta_slope == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(second->slipping);
  CHECK(second->severity == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("detector: mid-window frames produce no output") {
  SlipDetector det(SlipParams{}, 0.01);
  for (int k = 0; k < 9; ++k) CHECK_FALSE(det.update(0.01 * k, 0.1).has_value());
  CHECK(det.update(0.09, 0.1).has_value());
}

TEST_CASE("detector: severity zero iff not slipping") {
  SlipParams p;
  SlipDetector det(p, 0.01);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (int k = 0; k < 500; ++k) {
    if (auto est = det.update(0.01 * k, 0.3 + noise(rng))) {
      CHECK((est->severity == 0.0) == !est->slipping);
    }
  }
}

TEST_CASE("detector: out-of-order timestamps are an error") {
  SlipDetector det(SlipParams{}, 0.01);
  (void)det.update(0.0, 0.1);
  (void)det.update(0.01, 0.1);
  CHECK_THROWS_AS((void)det.update(0.005, 0.1), std::invalid_argument);
}

TEST_CASE("detector: exactly floor(T / window) estimates per stream") {
  for (double duration : {1.0, 2.5, 0.73}) {
    SlipDetector det(SlipParams{}, 0.01);
    const int ticks = static_cast<int>(std::llround(duration / 0.01));
    int estimates = 0;
    for (int k = 0; k < ticks; ++k) {
      if (det.update(0.01 * k, 0.2)) ++estimates;
    }
    CHECK(estimates == static_cast<int>(duration / 0.1));
  }
}

TEST_CASE("severity_to_correction: linear gain with saturation") {
  SlipParams p;  // g_slip 0.02, cap 0.1
  SlipEstimate est;
  est.severity = 0.0;
  CHECK(severity_to_correction(est, p) == 0.0);
  est.severity = 1.0;
  CHECK(severity_to_correction(est, p) == doctest::Approx(0.02));
  est.severity = 100.0;
  CHECK(severity_to_correction(est, p) == doctest::Approx(p.theta_max_slip));
}

TEST_CASE("severity_to_correction is monotone and bounded") {
  SlipParams p;
  double prev = -1.0;
  for (double sev = 0.0; sev < 20.0; sev += 0.25) {
    SlipEstimate est;
    est.severity = sev;
    const double c = severity_to_correction(est, p);
    CHECK(c >= prev);
    CHECK(c <= p.theta_max_slip);
    prev = c;
  }
}

TEST_CASE("noise-only stream: slipping in under 1% of windows") {
  SlipParams p;
  SensorParams sp;
  long windows = 0, flagged = 0;
  for (unsigned trace = 0; trace < 30; ++trace) {
    SensorRig rig(sp, 40000 + trace);
    WorldState w = make_world(ObjectSpec{"n", Shape::box, 0.3, 1.0, 0.9, 1000, 0.05});
    w.contacts[0].tip_in_contact = true;
    w.contacts[0].tip_force_n = 0.15;
    const Baseline base{rig.true_baseline(Digit::FF), sp.window_counts, 50};
    SlipDetector det(p, 0.01);
    for (int k = 0; k < 500; ++k) {
      w.time = 0.01 * k;
      const RawFrame f = rig.sample(w);
      if (auto est = det.update(f.t, normalize({f.digits[0].p_dc, f.t}, base))) {
        ++windows;
        if (est->slipping) ++flagged;
      }
    }
  }
  CHECK(static_cast<double>(flagged) / static_cast<double>(windows) <= 0.01);
}

TEST_CASE("injected slip at 5 mm/s is flagged within two windows") {
  SlipParams p;
  SensorParams sp;
  for (unsigned trace = 0; trace < 20; ++trace) {
    SensorRig rig(sp, 70000 + trace);
    WorldState w = make_world(ObjectSpec{"s", Shape::box, 0.3, 1.0, 0.9, 1000, 0.05});
    w.contacts[0].tip_in_contact = true;
    w.contacts[0].tip_force_n = 0.15;
    const Baseline base{rig.true_baseline(Digit::FF), sp.window_counts, 50};
    SlipDetector det(p, 0.01);
    const double onset = 1.0;
    double first = -1.0;
    for (int k = 0; k < 250; ++k) {
      w.time = 0.01 * k;
      w.slip_speed = (w.time >= onset) ? 0.005 : 0.0;
      const RawFrame f = rig.sample(w);
      if (auto est = det.update(f.t, normalize({f.digits[0].p_dc, f.t}, base))) {
        if (est->slipping && est->window_end_t >= onset && first < 0.0) {
          first = est->window_end_t;
        }
      }
    }
    REQUIRE(first >= 0.0);
    REQUIRE(first - onset <= 0.2 + 1e-9);
  }
}
