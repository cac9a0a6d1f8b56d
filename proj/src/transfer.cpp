#include "pointlab/transfer.hpp"

#include <algorithm>
#include <cmath>

namespace pointlab::transfer {

void TransferParams::validate() const {
  if (!(sensitivity > 0.0)) throw Error("transfer: sensitivity must be > 0");
  if (!(threshold_x >= 0.0) || !(threshold_y >= 0.0)) {
    throw Error("transfer: thresholds must be >= 0");
  }
  if (!(max_speed > 0.0)) throw Error("transfer: max_speed must be > 0");
}

void Screen::validate() const {
  if (width < 1 || height < 1) throw Error("screen: width and height must be >= 1");
}

void ResetPolicy::validate() const {
  if (!(period > 0.0)) throw Error("reset policy: period must be > 0");
}

TransferParams preset(std::string_view name) {
  if (name == "iteration1") return {20.0, 8.0, 8.0, 1500.0, "iteration1"};
  if (name == "iteration2") return {60.0, 2.0, 2.0, 1500.0, "iteration2"};
  std::string msg = "unknown preset '" + std::string(name) + "'; valid presets:";
  for (const auto& n : preset_names()) msg += " " + n;
  throw Error(msg);
}

std::vector<std::string> preset_names() { return {"iteration1", "iteration2"}; }

double dead_zone(double deflection, double threshold) {
  const double mag = std::abs(deflection) - threshold;
  if (mag <= 0.0) return 0.0;
  return std::copysign(mag, deflection);
}

Vec2 cursor_velocity(const sensing::Orientation& o, const sensing::Orientation& zero,
                     const TransferParams& p) {
  const double dx = wrap_degrees(o.yaw - zero.yaw);
  const double dy = o.pitch - zero.pitch;
  const double vx = std::clamp(p.sensitivity * dead_zone(dx, p.threshold_x), -p.max_speed,
                               p.max_speed);
  const double vy = std::clamp(p.sensitivity * dead_zone(dy, p.threshold_y), -p.max_speed,
                               p.max_speed);
  return {vx, -vy};
}

CursorState step_cursor(const CursorState& c, const Vec2& v, double dt, const Screen& s) {
  if (!std::isfinite(v[0]) || !std::isfinite(v[1])) throw Error("cursor: non-finite velocity");
  if (!(dt > 0.0)) throw Error("cursor: dt must be > 0");
  return {std::clamp(c.x + v[0] * dt, 0.0, static_cast<double>(s.width - 1)),
          std::clamp(c.y + v[1] * dt, 0.0, static_cast<double>(s.height - 1)), c.t + dt};
}

Pointer::Pointer(const sensing::CalibrationState& cal, const sensing::FilterParams& fp,
                 const TransferParams& p, const Screen& s, const ResetPolicy& rp,
                 const CursorState& start)
    : filter_(cal, fp), params_(p), screen_(s), policy_(rp), cursor_(start) {
  p.validate();
  s.validate();
  rp.validate();
  cursor_.x = std::clamp(cursor_.x, 0.0, static_cast<double>(s.width - 1));
  cursor_.y = std::clamp(cursor_.y, 0.0, static_cast<double>(s.height - 1));
}

const CursorState& Pointer::push(const sensing::ImuSample& sample) {
  if (!started_) {
    zero_ = filter_.update(sample);
    t0_ = sample.t;
    cursor_.t = sample.t;
    started_ = true;
    return cursor_;
  }

  const sensing::Orientation prev = filter_.current();
  Vec2 v = cursor_velocity(prev, zero_, params_);
  const double t_prev = prev.t;
  const sensing::Orientation o = filter_.update(sample);
  const double dt = o.t - t_prev;
  if (params_.mode == TransferMode::position) {
    v = {params_.sensitivity * wrap_degrees(o.yaw - prev.yaw) / dt,
         -params_.sensitivity * (o.pitch - prev.pitch) / dt};
    v[0] = std::clamp(v[0], -params_.max_speed, params_.max_speed);
    v[1] = std::clamp(v[1], -params_.max_speed, params_.max_speed);
  }
  cursor_ = step_cursor(cursor_, v, dt, screen_);
  cursor_.t = o.t;

  if (policy_.enabled) {
    const auto before = std::floor((t_prev - t0_) / policy_.period);
    const auto now = std::floor((o.t - t0_) / policy_.period);
    if (now > before) {
      ResetEvent ev;
      ev.t = o.t;
      ev.yaw_before = wrap_degrees(o.yaw - zero_.yaw);
      ev.pitch_before = o.pitch - zero_.pitch;
      zero_ = o;
      resets_.push_back(ev);
    }
  }
  return cursor_;
}

PipelineResult run_pipeline(std::span<const sensing::ImuSample> samples,
                            const sensing::CalibrationState& cal,
                            const sensing::FilterParams& fp, const TransferParams& p,
                            const Screen& s, const ResetPolicy& rp, const CursorState& start) {
  Pointer pointer(cal, fp, p, s, rp, start);
  PipelineResult out;
  out.cursor.reserve(samples.size());
  out.orientation.reserve(samples.size());
  for (const auto& sample : samples) {
    out.cursor.push_back(pointer.push(sample));
    out.orientation.push_back(pointer.orientation());
  }
  out.resets = pointer.resets();
  return out;
}

}  // namespace pointlab::transfer
