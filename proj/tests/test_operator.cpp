#include <doctest.h>

#include <cmath>

#include "pointlab/operator_model.hpp"
#include "pointlab/task.hpp"

using namespace pointlab;
using namespace pointlab::operator_model;

TEST_CASE("min_jerk boundaries and symmetry") {
  MinJerkSegment seg{-10.0, 35.0, 1.7};
  CHECK(min_jerk(seg, 0.0) == -10.0);
  CHECK(min_jerk(seg, 1.7) == doctest::Approx(35.0).epsilon(1e-12));
  CHECK(min_jerk(seg, 0.85) == doctest::Approx(12.5).epsilon(1e-12));
  CHECK_THROWS_AS(min_jerk(seg, -0.01), Error);
  CHECK_THROWS_AS(min_jerk(seg, 1.71), Error);
  CHECK_THROWS_AS(min_jerk({0, 1, 0.0}, 0.0), Error);
}

TEST_CASE("steer follows the proportional law") {
  OperatorParams p;
  p.steer_gain = 0.2;
  p.max_rate = 30.0;
  p.tremor_sigma = 0.0;
  p.reaction_delay = 0.0;
  p.lead_time = 0.0;
  Operator op(p);
  const Vec2 start{500, 500};
  CursorHistory h(start);
  const transfer::CursorState c{500, 500, 0};
  CHECK(op.steer(c, {500, 500}, 1.0, h) == Vec2{0, 0});
  CHECK(op.steer(c, {600, 500}, 1.0, h) == Vec2{20, 0});
  CHECK(op.steer(c, {1500, 500}, 1.0, h) == Vec2{30, 0});
  // Target above the cursor (smaller y) asks for positive pitch.
  CHECK(op.steer(c, {500, 400}, 1.0, h) == Vec2{0, 20});
}

TEST_CASE("steer uses the delayed view") {
  OperatorParams p;
  p.steer_gain = 0.2;
  p.max_rate = 100.0;
  p.tremor_sigma = 0.0;
  p.reaction_delay = 0.2;
  p.lead_time = 0.0;
  Operator op(p);
  CursorHistory h({0, 0});
  for (int i = 1; i <= 100; ++i) h.push(i * 0.01, {i * 1.0, 0});  // 100 px/s
  const transfer::CursorState now{100, 0, 1.0};
  // Seen at t = 0.8 at x = 80, extrapolated 0.2 s at 100 px/s -> 100.
  CHECK(op.steer(now, {200, 0}, 1.0, h)[0] == doctest::Approx(20.0).epsilon(1e-9));
  // Before the delay has elapsed the new target is not yet seen.
  CursorHistory fresh({0, 0});
  CHECK(op.steer({0, 0, 0}, {200, 0}, 0.1, fresh) == Vec2{0, 0});
}

TEST_CASE("tremor is seeded") {
  OperatorParams p;
  p.seed = 99;
  Operator a(p);
  Operator b(p);
  CursorHistory h({0, 0});
  for (int i = 0; i < 10; ++i) CHECK(a.steer({0, 0, 0}, {50, 50}, 1.0, h) == b.steer({0, 0, 0}, {50, 50}, 1.0, h));
}

TEST_CASE("operator validation") {
  OperatorParams p;
  p.steer_gain = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.reaction_delay = -0.1;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.familiarity = 1.5;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("learning schedule") {
  LearningSchedule s;
  CHECK(s.factor(1) == 1.0);
  CHECK(s.factor(2) == doctest::Approx(0.9));
  CHECK(s.factor(5) == doctest::Approx(0.6));
  CHECK(s.factor(9) == doctest::Approx(0.6));
  OperatorParams base;
  auto p1 = s.apply(base, 1);
  auto p4 = s.apply(base, 4);
  CHECK(p1.familiarity == 0.0);
  CHECK(p4.familiarity == doctest::Approx(0.75));
  CHECK(p4.reaction_delay == doctest::Approx(0.7 * base.reaction_delay));
  CHECK(p4.tremor_sigma == doctest::Approx(0.7 * base.tremor_sigma));
  CHECK(p1.effective_relax() > p4.effective_relax());
}

TEST_CASE("acquisition starting inside the target takes one dwell") {
  OperatorParams p;
  p.tremor_sigma = 0.0;
  Operator op(p);
  SimulatedDevice dev(task::device_model("iteration2"), {}, {960, 540}, 1);
  auto a = acquire_target(op, dev, {965, 540}, 24.0, 0.5, 60.0);
  CHECK_FALSE(a.timed_out);
  CHECK(std::abs(a.movement_time - 0.5) <= dev.dt() + 1e-9);
}

TEST_CASE("acquisition is deterministic and times out cleanly") {
  OperatorParams p;
  p.tremor_sigma = 0.0;
  p.reaction_delay = 0.0;
  auto run = [&](double timeout) {
    Operator op(p);
    SimulatedDevice dev(task::device_model("iteration1"), {}, {960, 540}, 5);
    return acquire_target(op, dev, {300, 200}, 24.0, 0.5, timeout);
  };
  auto a = run(60.0);
  auto b = run(60.0);
  CHECK_FALSE(a.timed_out);
  CHECK(a.movement_time == b.movement_time);
  CHECK(a.path == b.path);
  auto c = run(1.0);
  CHECK(c.timed_out);
  CHECK(c.movement_time == 1.0);
  CHECK(c.path.size() > 50);
}

TEST_CASE("acquisition argument checks") {
  Operator op(OperatorParams{});
  SimulatedDevice dev(task::device_model("iteration2"), {}, {960, 540}, 1);
  CHECK_THROWS_AS(acquire_target(op, dev, {0, 0}, 0.0, 0.5, 10.0), Error);
  CHECK_THROWS_AS(acquire_target(op, dev, {0, 0}, 24.0, 0.0, 10.0), Error);
  CHECK_THROWS_AS(acquire_target(op, dev, {0, 0}, 24.0, 0.5, 0.5), Error);
}

TEST_CASE("MT grows with distance on average") {
  for (const char* model : {"control", "iteration1", "iteration2"}) {
  double prev = 0.0;
  for (double d : {50.0, 150.0, 300.0, 500.0, 700.0}) {
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      OperatorParams p;
      p.seed = seed;
      if (std::string(model) == "control") p.lead_time = 0.0;
      Operator op(p);
      SimulatedDevice dev(task::device_model(model), {}, {960, 540}, seed);
      const double ang = 0.7 * static_cast<double>(seed);
      const Vec2 target{960 + d * std::cos(ang), 540 + 0.6 * d * std::sin(ang)};
      sum += acquire_target(op, dev, target, 24.0, 0.5, 60.0).movement_time;
    }
    const double mean = sum / 20.0;
    CHECK_MESSAGE(mean >= prev, model << " at " << d << " px");
    prev = mean;
  }
  }
}
