#include "pointlab/operator_model.hpp"

#include <algorithm>
#include <cmath>

namespace pointlab::operator_model {

namespace {

// Smoothing window for the perceived cursor velocity.
constexpr double kVelocityWindow = 0.05;

double hypot2(const Vec2& a, const Vec2& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

}  // namespace

double OperatorParams::effective_relax() const {
  return hold_relax * (1.0 + novice_extra_relax * (1.0 - familiarity));
}

void OperatorParams::validate() const {
  if (!(reaction_delay >= 0.0)) throw Error("operator: reaction_delay must be >= 0");
  if (!(steer_gain > 0.0)) throw Error("operator: steer_gain must be > 0");
  if (!(max_rate > 0.0)) throw Error("operator: max_rate must be > 0");
  if (!(tremor_sigma >= 0.0)) throw Error("operator: tremor_sigma must be >= 0");
  if (!(lead_time >= 0.0)) throw Error("operator: lead_time must be >= 0");
  if (!(hold_relax >= 0.0)) throw Error("operator: hold_relax must be >= 0");
  if (!(familiarity >= 0.0 && familiarity <= 1.0)) {
    throw Error("operator: familiarity must lie in [0, 1]");
  }
  if (!(novice_extra_relax >= 0.0)) throw Error("operator: novice_extra_relax must be >= 0");
  if (!(dead_zone_boost >= 0.0)) throw Error("operator: dead_zone_boost must be >= 0");
}

double min_jerk(const MinJerkSegment& seg, double t) {
  if (!(seg.duration > 0.0)) throw Error("min_jerk: duration must be > 0");
  if (!(t >= 0.0 && t <= seg.duration)) throw Error("min_jerk: t outside [0, duration]");
  const double tau = t / seg.duration;
  const double tau3 = tau * tau * tau;
  const double shape = tau3 * (10.0 - 15.0 * tau + 6.0 * tau * tau);
  return seg.start_value + (seg.end_value - seg.start_value) * shape;
}

double LearningSchedule::factor(int trial_index) const {
  return std::max(floor, 1.0 - step * static_cast<double>(trial_index - 1));
}

OperatorParams LearningSchedule::apply(const OperatorParams& base, int trial_index) const {
  OperatorParams p = base;
  const double f = factor(trial_index);
  p.reaction_delay *= f;
  p.tremor_sigma *= f;
  // Familiarity grows from none on trial 1 to full once the delay/tremor
  // factor bottoms out.
  if (learn_device && floor < 1.0) p.familiarity *= (1.0 - f) / (1.0 - floor);
  return p;
}

CursorHistory::CursorHistory(const Vec2& start) { samples_.push_back({0.0, start[0], start[1]}); }

void CursorHistory::push(double elapsed, const Vec2& pos) {
  if (elapsed < samples_.back().t) throw Error("history: time went backwards");
  samples_.push_back({elapsed, pos[0], pos[1]});
}

Vec2 CursorHistory::position_at(double elapsed) const {
  if (elapsed <= samples_.front().t) return {samples_.front().x, samples_.front().y};
  if (elapsed >= samples_.back().t) return {samples_.back().x, samples_.back().y};
  auto hi = std::lower_bound(samples_.begin(), samples_.end(), elapsed,
                             [](const PathSample& s, double t) { return s.t < t; });
  auto lo = hi - 1;
  const double span = hi->t - lo->t;
  const double w = span > 0.0 ? (elapsed - lo->t) / span : 1.0;
  return {lo->x + w * (hi->x - lo->x), lo->y + w * (hi->y - lo->y)};
}

Vec2 CursorHistory::velocity_at(double elapsed, double window) const {
  const Vec2 a = position_at(elapsed - window);
  const Vec2 b = position_at(elapsed);
  return {(b[0] - a[0]) / window, (b[1] - a[1]) / window};
}

Operator::Operator(const OperatorParams& p) : params_(p), rng_(p.seed) { p.validate(); }

Vec2 Operator::steer(const transfer::CursorState& cursor, const Vec2& target, double elapsed,
                     const CursorHistory& history) {
  const double seen_at = elapsed - params_.reaction_delay;
  Vec2 seen = params_.reaction_delay > 0.0 ? history.position_at(seen_at)
                                           : Vec2{cursor.x, cursor.y};
  const Vec2 v = history.velocity_at(seen_at, kVelocityWindow);
  // Extrapolate across the delay and a further lead_time ahead of "now".
  const double horizon = params_.reaction_delay + params_.lead_time;
  seen[0] += horizon * v[0];
  seen[1] += horizon * v[1];

  // A freshly presented target is only seen after the reaction delay; until
  // then the operator holds the cursor where it was.
  const Vec2 aim = elapsed < params_.reaction_delay ? history.position_at(0.0) : target;
  const Vec2 error{aim[0] - seen[0], seen[1] - aim[1]};
  Vec2 rate{};
  for (int i = 0; i < 2; ++i) {
    const double tremor = normal_(rng_);
    rate[i] = std::clamp(params_.steer_gain * error[i], -params_.max_rate, params_.max_rate) +
              params_.tremor_sigma * tremor;
  }
  return rate;
}

void DeviceModel::validate() const {
  transfer.validate();
  filter.validate();
  drift.validate();
  reset.validate();
  if (calibration_samples < 1) throw Error("device: calibration_samples must be >= 1");
  if (!(max_deflection > 0.0 && max_deflection < 90.0)) {
    throw Error("device: max_deflection must lie in (0, 90)");
  }
}

namespace {

sensing::CalibrationState calibrate_at_rest(sensing::ImuSynthesizer& synth,
                                            const DeviceModel& model, double dt) {
  std::vector<sensing::ImuSample> buffer;
  buffer.reserve(model.calibration_samples);
  const sensing::Angles rest{};
  for (std::size_t k = 0; k < model.calibration_samples; ++k) {
    buffer.push_back(synth.next(static_cast<double>(k) * dt, rest, rest));
  }
  return sensing::calibrate(buffer, model.calibration_samples);
}

const DeviceModel& validated(const DeviceModel& m) {
  m.validate();
  return m;
}

}  // namespace

SimulatedDevice::SimulatedDevice(const DeviceModel& model, const transfer::Screen& screen,
                                 const Vec2& start, std::uint64_t seed)
    : model_(validated(model)),
      dt_(1.0 / model.filter.sample_rate),
      synth_(model.drift, model.filter.sample_rate, seed),
      cal_(calibrate_at_rest(synth_, model_, dt_)),
      pointer_(cal_, model.filter, model.transfer, screen, model.reset,
               transfer::CursorState{start[0], start[1], 0.0}),
      tick_(model.calibration_samples) {
  pointer_.push(synth_.next(static_cast<double>(tick_) * dt_, hand_, hand_));
}

const transfer::CursorState& SimulatedDevice::step(const Vec2& wrist_rates, double hold_relax,
                                                   double dead_zone_boost) {
  const sensing::Angles prev = hand_;
  const double lim = model_.max_deflection;
  // Easing back only makes sense on a rate controller; on a direct pointer it
  // would drag the cursor home.
  if (model_.transfer.mode == transfer::TransferMode::position) hold_relax = 0.0;
  const auto& tp = model_.transfer;
  auto axis_rate = [&](double cmd, double angle, double threshold) {
    if (std::abs(angle) < threshold) return cmd * (1.0 + dead_zone_boost);
    return cmd - hold_relax * transfer::dead_zone(angle, threshold);
  };
  const double yaw_rate = axis_rate(wrist_rates[0], hand_.yaw, tp.threshold_x);
  const double pitch_rate = axis_rate(wrist_rates[1], hand_.pitch, tp.threshold_y);
  hand_.yaw = std::clamp(hand_.yaw + yaw_rate * dt_, -lim, lim);
  hand_.pitch = std::clamp(hand_.pitch + pitch_rate * dt_, -lim, lim);
  ++tick_;
  return pointer_.push(synth_.next(static_cast<double>(tick_) * dt_, prev, hand_));
}

Acquisition acquire_target(Operator& op, SimulatedDevice& device, const Vec2& target,
                           double radius, double dwell, double timeout) {
  if (!(radius > 0.0)) throw Error("acquire: radius must be > 0");
  if (!(dwell > 0.0)) throw Error("acquire: dwell must be > 0");
  if (!(timeout > dwell)) throw Error("acquire: timeout must exceed dwell");

  const double dt = device.dt();
  const Vec2 start{device.cursor().x, device.cursor().y};
  CursorHistory history(start);
  // Tolerance for comparing accumulated sample times against dwell/timeout.
  const double eps = 1e-9;

  double inside_since = hypot2(start, target) <= radius ? 0.0 : -1.0;
  Acquisition out;
  for (std::size_t tick = 0;; ++tick) {
    const double elapsed = static_cast<double>(tick) * dt;
    if (inside_since >= 0.0 && elapsed - inside_since >= dwell - eps) {
      out.movement_time = elapsed;
      break;
    }
    if (elapsed >= timeout - eps) {
      out.movement_time = timeout;
      out.timed_out = true;
      break;
    }
    const Vec2 rates = op.steer(device.cursor(), target, elapsed, history);
    const auto& c =
        device.step(rates, op.params().effective_relax(), op.params().dead_zone_boost);
    const double now = static_cast<double>(tick + 1) * dt;
    const Vec2 pos{c.x, c.y};
    history.push(now, pos);
    if (hypot2(pos, target) <= radius) {
      if (inside_since < 0.0) inside_since = now;
    } else {
      inside_since = -1.0;
    }
  }
  out.path = history.samples();
  return out;
}

}  // namespace pointlab::operator_model
