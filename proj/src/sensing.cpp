#include "pointlab/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pointlab {

double wrap_degrees(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r <= -180.0) r += 360.0;
  if (r > 180.0) r -= 360.0;
  return r;
}

}  // namespace pointlab

namespace pointlab::sensing {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

bool finite3(const Vec3& v) {
  return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

}  // namespace

void DriftParams::validate() const {
  if (!(gyro_bias_walk_sigma >= 0.0) || !(white_noise_sigma_gyro >= 0.0) ||
      !(white_noise_sigma_accel >= 0.0)) {
    throw Error("drift: noise sigmas must be >= 0");
  }
  if (!(onset_time > 0.0)) throw Error("drift: onset_time must be > 0");
  if (!finite3(constant_gyro_bias)) throw Error("drift: constant_gyro_bias must be finite");
}

void FilterParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error("filter: alpha must lie in [0, 1]");
  if (!(sample_rate > 0.0)) throw Error("filter: sample_rate must be > 0");
}

AnglePlan AnglePlan::constant(Angles a, double duration) {
  return {duration, [a](double) { return a; }};
}

AnglePlan AnglePlan::ramp(Angles rates, double duration) {
  return {duration, [rates](double t) {
            return Angles{rates.yaw * t, rates.pitch * t, rates.roll * t};
          }};
}

Vec3 gravity_body(double pitch_deg, double roll_deg) {
  const double p = pitch_deg * kDegToRad;
  const double r = roll_deg * kDegToRad;
  return {-std::sin(p), std::sin(r) * std::cos(p), std::cos(r) * std::cos(p)};
}

Angles accel_tilt(const Vec3& a) {
  Angles out;
  out.pitch = std::atan2(-a[0], std::hypot(a[1], a[2])) * kRadToDeg;
  out.roll = std::atan2(a[1], a[2]) * kRadToDeg;
  return out;
}

ImuSynthesizer::ImuSynthesizer(const DriftParams& drift, double sample_rate, std::uint64_t seed)
    : drift_(drift), dt_(0.0), rng_(seed) {
  drift.validate();
  if (!(sample_rate > 0.0)) throw Error("synth: sample_rate must be > 0");
  dt_ = 1.0 / sample_rate;
}

ImuSample ImuSynthesizer::next(double t, const Angles& prev, const Angles& now) {
  // Nine draws per sample regardless of configuration keep streams aligned
  // across parameter changes.
  Vec3 step{}, gnoise{}, anoise{};
  for (auto& v : step) v = normal_(rng_);
  for (auto& v : gnoise) v = normal_(rng_);
  for (auto& v : anoise) v = normal_(rng_);

  if (t >= drift_.onset_time) {
    const double k = drift_.gyro_bias_walk_sigma * std::sqrt(dt_);
    for (int i = 0; i < 3; ++i) walk_[i] += k * step[i];
  }

  ImuSample s;
  s.t = t;
  const Vec3 rates{wrap_degrees(now.roll - prev.roll) / dt_, (now.pitch - prev.pitch) / dt_,
                   wrap_degrees(now.yaw - prev.yaw) / dt_};
  for (int i = 0; i < 3; ++i) {
    s.gyro[i] = rates[i] + drift_.constant_gyro_bias[i] + walk_[i] +
                drift_.white_noise_sigma_gyro * gnoise[i];
  }
  const Vec3 g = gravity_body(now.pitch, now.roll);
  for (int i = 0; i < 3; ++i) s.accel[i] = g[i] + drift_.white_noise_sigma_accel * anoise[i];
  return s;
}

std::vector<ImuSample> synth_imu_stream(const AnglePlan& plan, const DriftParams& drift,
                                        double sample_rate, std::uint64_t seed) {
  if (!plan.at || !(plan.duration >= 0.0) || !std::isfinite(plan.duration)) {
    throw Error("synth: angle plan is empty");
  }
  if (!(sample_rate > 0.0)) throw Error("synth: sample_rate must be > 0");

  ImuSynthesizer synth(drift, sample_rate, seed);
  const auto n = static_cast<std::size_t>(std::floor(plan.duration * sample_rate + 1e-9)) + 1;
  std::vector<ImuSample> out;
  out.reserve(n);

  const Angles first = plan.at(0.0);
  // The first sample has no predecessor: mirror the first step so its rate
  // equals the forward difference.
  Angles prev = first;
  if (n > 1) {
    const Angles fwd = plan.at(1.0 / sample_rate);
    prev = {first.yaw - wrap_degrees(fwd.yaw - first.yaw), first.pitch - (fwd.pitch - first.pitch),
            first.roll - wrap_degrees(fwd.roll - first.roll)};
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / sample_rate;
    const Angles now = k == 0 ? first : plan.at(t);
    out.push_back(synth.next(t, prev, now));
    prev = now;
  }
  return out;
}

CalibrationState calibrate(std::span<const ImuSample> samples, std::size_t buffer_len) {
  if (buffer_len < 1) throw Error("calibrate: buffer_len must be >= 1");
  if (samples.size() < buffer_len) {
    throw Error("calibrate: need " + std::to_string(buffer_len) + " samples, got " +
                std::to_string(samples.size()));
  }
  CalibrationState cal;
  cal.buffer_len = buffer_len;
  Vec3 gsum{}, asum{};
  for (std::size_t k = 0; k < buffer_len; ++k) {
    for (int i = 0; i < 3; ++i) {
      gsum[i] += samples[k].gyro[i];
      asum[i] += samples[k].accel[i];
    }
  }
  const double n = static_cast<double>(buffer_len);
  const Vec3 gravity{0.0, 0.0, 1.0};
  for (int i = 0; i < 3; ++i) {
    cal.gyro_bias[i] = gsum[i] / n;
    cal.accel_bias[i] = asum[i] / n - gravity[i];
  }
  if (!finite3(cal.gyro_bias) || !finite3(cal.accel_bias)) {
    throw Error("calibrate: non-finite bias");
  }
  return cal;
}

OrientationFilter::OrientationFilter(const CalibrationState& cal, const FilterParams& fp)
    : cal_(cal), fp_(fp) {
  fp.validate();
}

Orientation OrientationFilter::update(const ImuSample& raw) {
  if (!std::isfinite(raw.t) || !finite3(raw.accel) || !finite3(raw.gyro)) {
    throw Error("orientation: non-finite sample at t=" + std::to_string(raw.t));
  }
  Vec3 gyro{}, accel{};
  for (int i = 0; i < 3; ++i) {
    gyro[i] = raw.gyro[i] - cal_.gyro_bias[i];
    accel[i] = raw.accel[i] - cal_.accel_bias[i];
  }
  const Angles tilt = accel_tilt(accel);

  if (!started_) {
    started_ = true;
    state_ = {raw.t, 0.0, tilt.pitch, tilt.roll};
    return state_;
  }

  const double dt = raw.t - state_.t;
  if (!(dt > 0.0)) throw Error("orientation: timestamps must strictly increase");

  const double a = fp_.alpha;
  const double pitch_gyro = state_.pitch + gyro[1] * dt;
  const double roll_gyro = state_.roll + gyro[0] * dt;

  state_.t = raw.t;
  state_.yaw = wrap_degrees(state_.yaw + gyro[2] * dt);
  state_.pitch = std::clamp(a * pitch_gyro + (1.0 - a) * tilt.pitch, -90.0, 90.0);
  // Blend on the wrapped difference so the filter behaves across +-180.
  state_.roll = wrap_degrees(tilt.roll + a * wrap_degrees(roll_gyro - tilt.roll));
  return state_;
}

std::vector<Orientation> estimate_orientation(std::span<const ImuSample> samples,
                                              const CalibrationState& cal,
                                              const FilterParams& fp) {
  OrientationFilter filter(cal, fp);
  std::vector<Orientation> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(filter.update(s));
  return out;
}

}  // namespace pointlab::sensing
