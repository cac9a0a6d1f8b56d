#pragma once

// 6-axis IMU stand-in: synthetic sample generation, serial-log ingestion,
// stationary-buffer calibration and a complementary orientation filter.
//
// Axis conventions (board flat, glove on the right hand):
//   gyro.x = roll rate, gyro.y = pitch rate, gyro.z = yaw rate   [deg/s]
//   accel  = gravity in the body frame                           [g]
//          = (-sin pitch, sin roll cos pitch, cos roll cos pitch)

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pointlab/common.hpp"

namespace pointlab::sensing {

struct ImuSample {
  double t = 0.0;
  Vec3 accel{0.0, 0.0, 1.0};
  Vec3 gyro{0.0, 0.0, 0.0};

  bool operator==(const ImuSample&) const = default;
};

struct Angles {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
};

struct Orientation {
  double t = 0.0;
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
};

struct CalibrationState {
  Vec3 gyro_bias{0.0, 0.0, 0.0};
  Vec3 accel_bias{0.0, 0.0, 0.0};
  std::size_t buffer_len = 1;

  // Identity calibration, used when a stream is fused uncalibrated.
  static CalibrationState none() { return {}; }
};

struct DriftParams {
  double gyro_bias_walk_sigma = 0.0;  // deg/s per sqrt(s), after onset only
  double onset_time = 120.0;          // s
  double white_noise_sigma_gyro = 0.0;
  double white_noise_sigma_accel = 0.0;
  // Fixed turn-on bias present from t = 0 (what calibration is meant to remove).
  Vec3 constant_gyro_bias{0.0, 0.0, 0.0};

  void validate() const;
};

struct FilterParams {
  double alpha = 0.98;
  double sample_rate = 100.0;

  void validate() const;
};

inline constexpr double kDefaultSampleRate = 100.0;
inline constexpr std::size_t kDefaultBufferLen = 100;

// Time-indexed hand orientation over [0, duration].
struct AnglePlan {
  double duration = 0.0;
  std::function<Angles(double)> at;

  static AnglePlan constant(Angles a, double duration);
  // Linear ramps from zero with the given rates (deg/s).
  static AnglePlan ramp(Angles rates, double duration);
};

// Streaming generator. Rates are backward finite differences of consecutive
// plan angles, so integrating gyro over each interval reproduces the plan.
class ImuSynthesizer {
 public:
  ImuSynthesizer(const DriftParams& drift, double sample_rate, std::uint64_t seed);

  // `prev` is the plan one sample earlier (equal to `now` for the first sample).
  ImuSample next(double t, const Angles& prev, const Angles& now);

  const Vec3& walk_bias() const { return walk_; }

 private:
  DriftParams drift_;
  double dt_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  Vec3 walk_{0.0, 0.0, 0.0};
};

std::vector<ImuSample> synth_imu_stream(const AnglePlan& plan, const DriftParams& drift,
                                        double sample_rate, std::uint64_t seed);

// Serial-log text format: header `t,ax,ay,az,gx,gy,gz`, one sample per line.
inline constexpr std::string_view kSerialLogHeader = "t,ax,ay,az,gx,gy,gz";
inline constexpr int kSerialLogDecimals = 6;

std::vector<ImuSample> parse_serial_log(std::string_view text);
std::string serialize_serial_log(std::span<const ImuSample> samples);

CalibrationState calibrate(std::span<const ImuSample> samples,
                           std::size_t buffer_len = kDefaultBufferLen);

// Tilt implied by the gravity vector alone.
Angles accel_tilt(const Vec3& accel);
Vec3 gravity_body(double pitch_deg, double roll_deg);

class OrientationFilter {
 public:
  OrientationFilter(const CalibrationState& cal, const FilterParams& fp);

  Orientation update(const ImuSample& s);
  const Orientation& current() const { return state_; }
  bool started() const { return started_; }

 private:
  CalibrationState cal_;
  FilterParams fp_;
  bool started_ = false;
  Orientation state_{};
};

std::vector<Orientation> estimate_orientation(std::span<const ImuSample> samples,
                                              const CalibrationState& cal,
                                              const FilterParams& fp);

}  // namespace pointlab::sensing
