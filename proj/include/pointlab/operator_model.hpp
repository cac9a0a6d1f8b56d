#pragma once

// Synthetic human operator for the closed-loop pointing simulation.
//
// The operator looks at a delayed view of the cursor, extrapolates it by its
// (delayed) velocity, and commands wrist angular rates proportional to the
// remaining pixel error. The wrist integrates those rates; on a rate-control
// device it also eases back toward the dead-zone edge while the cursor moves
// and swings quickly through the dead zone itself.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pointlab/common.hpp"
#include "pointlab/sensing.hpp"
#include "pointlab/transfer.hpp"

namespace pointlab::operator_model {

struct OperatorParams {
  double reaction_delay = 0.2;  // s
  double steer_gain = 0.15;     // deg/s per pixel of error
  double max_rate = 45.0;       // deg/s
  double tremor_sigma = 1.5;    // deg/s, white per control tick
  std::uint64_t seed = 1;
  double lead_time = 0.3;       // s of extrapolation beyond the delay
  // 1/s. While the cursor moves the wrist eases back toward the dead-zone
  // edge at this rate.
  double hold_relax = 1.5;
  // Device familiarity in [0, 1]. A novice (0) pulls back harder by a factor
  // (1 + novice_extra_relax), which caps cursor speed lower.
  double familiarity = 1.0;
  double novice_extra_relax = 0.5;
  // Inside the dead zone the cursor gives no feedback, so the wrist is swung
  // through it (1 + dead_zone_boost) times faster than commanded.
  double dead_zone_boost = 1.0;

  double effective_relax() const;
  void validate() const;
};

struct MinJerkSegment {
  double start_value = 0.0;
  double end_value = 0.0;
  double duration = 1.0;
};

// x0 + (xf - x0)(10 tau^3 - 15 tau^4 + 6 tau^5), tau = t / duration.
double min_jerk(const MinJerkSegment& seg, double t);

// Per-trial scaling of reaction delay and tremor: f = max(floor, 1 - step (k - 1)).
// With learn_device, familiarity is scaled by (1 - f) / (1 - floor).
struct LearningSchedule {
  double step = 0.1;
  double floor = 0.6;
  bool learn_device = true;

  double factor(int trial_index) const;
  OperatorParams apply(const OperatorParams& base, int trial_index) const;
};

struct PathSample {
  double t = 0.0;  // s since target presentation (or trial start, once merged)
  double x = 0.0;
  double y = 0.0;

  bool operator==(const PathSample&) const = default;
};

// Cursor positions indexed by time since target presentation.
class CursorHistory {
 public:
  explicit CursorHistory(const Vec2& start);

  void push(double elapsed, const Vec2& pos);
  // Linear interpolation; times before the first entry return the start position.
  Vec2 position_at(double elapsed) const;
  // Backward difference over `window` seconds ending at `elapsed`.
  Vec2 velocity_at(double elapsed, double window) const;
  const std::vector<PathSample>& samples() const { return samples_; }

 private:
  std::vector<PathSample> samples_;
};

class Operator {
 public:
  explicit Operator(const OperatorParams& p);

  // Commanded (yaw_rate, pitch_rate) in deg/s. Screen y grows downward while
  // positive pitch moves the cursor up, so the vertical error is negated.
  Vec2 steer(const transfer::CursorState& cursor, const Vec2& target, double elapsed,
             const CursorHistory& history);

  const OperatorParams& params() const { return params_; }

 private:
  OperatorParams params_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Everything between the wrist and the screen.
struct DeviceModel {
  std::string name = "custom";
  transfer::TransferParams transfer;
  sensing::FilterParams filter;
  sensing::DriftParams drift;
  transfer::ResetPolicy reset;
  std::size_t calibration_samples = sensing::kDefaultBufferLen;
  double max_deflection = 80.0;  // wrist range of motion, degrees

  void validate() const;
};

// A hand wearing the device: wrist angles feed the IMU synthesizer, the
// synthetic samples go through calibration, fusion and the transfer function.
class SimulatedDevice {
 public:
  // Calibrates on a stationary buffer, then captures the zero reference.
  SimulatedDevice(const DeviceModel& model, const transfer::Screen& screen, const Vec2& start,
                  std::uint64_t seed);

  // Advances one sample period with the commanded wrist rates.
  const transfer::CursorState& step(const Vec2& wrist_rates, double hold_relax,
                                    double dead_zone_boost = 0.0);

  const transfer::CursorState& cursor() const { return pointer_.cursor(); }
  const transfer::Pointer& pointer() const { return pointer_; }
  const sensing::Angles& hand() const { return hand_; }
  const sensing::CalibrationState& calibration() const { return cal_; }
  double dt() const { return dt_; }
  const DeviceModel& model() const { return model_; }

 private:
  DeviceModel model_;
  double dt_;
  sensing::ImuSynthesizer synth_;
  sensing::CalibrationState cal_;
  transfer::Pointer pointer_;
  sensing::Angles hand_{};
  std::size_t tick_ = 0;
};

struct Acquisition {
  double movement_time = 0.0;  // s, presentation to end of dwell
  bool timed_out = false;
  std::vector<PathSample> path;
};

// Runs steer -> wrist -> IMU -> pointer at the device sample rate until the
// cursor has stayed within `radius` of `target` for `dwell` seconds.
Acquisition acquire_target(Operator& op, SimulatedDevice& device, const Vec2& target,
                           double radius, double dwell, double timeout);

}  // namespace pointlab::operator_model
