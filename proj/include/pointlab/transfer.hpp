#pragma once

// Rate-control transfer function: angular deflection from a captured zero
// reference drives cursor velocity through a per-axis subtractive dead zone.
// Yaw drives the horizontal axis, pitch the vertical one; roll is unused.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pointlab/common.hpp"
#include "pointlab/sensing.hpp"

namespace pointlab::transfer {

// `rate`: deflection drives velocity (the glove prototypes).
// `position`: rotation drives displacement, sensitivity read as px per degree
// (a direct pointer such as a touchpad).
enum class TransferMode { rate, position };

struct TransferParams {
  double sensitivity = 40.0;  // px/s per degree beyond the threshold
  double threshold_x = 0.0;   // yaw dead zone, degrees
  double threshold_y = 0.0;   // pitch dead zone, degrees
  double max_speed = 1500.0;  // px/s, per axis
  std::string preset_name = "custom";
  TransferMode mode = TransferMode::rate;

  void validate() const;
  bool operator==(const TransferParams&) const = default;
};

struct Screen {
  int width = 1920;
  int height = 1080;

  void validate() const;
  bool operator==(const Screen&) const = default;
};

struct CursorState {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
};

struct ResetPolicy {
  double period = 120.0;
  bool enabled = false;

  void validate() const;
};

// Known presets: "iteration1" (low sensitivity, wide dead zone) and
// "iteration2" (high sensitivity, narrow dead zone).
TransferParams preset(std::string_view name);
std::vector<std::string> preset_names();

// Signed, dead-zone-subtracted deflection along one axis.
double dead_zone(double deflection, double threshold);

// Velocity in screen pixels/s; +yaw moves right, +pitch moves up (y decreases).
Vec2 cursor_velocity(const sensing::Orientation& o, const sensing::Orientation& zero,
                     const TransferParams& p);

CursorState step_cursor(const CursorState& c, const Vec2& v, double dt, const Screen& s);

struct ResetEvent {
  double t = 0.0;
  double yaw_before = 0.0;    // deflection from the old zero, degrees
  double pitch_before = 0.0;
};

// Incremental form of run_pipeline, used by the closed-loop simulator.
class Pointer {
 public:
  Pointer(const sensing::CalibrationState& cal, const sensing::FilterParams& fp,
          const TransferParams& p, const Screen& s, const ResetPolicy& rp,
          const CursorState& start);

  // Fuses one sample and advances the cursor over the elapsed interval. Rate
  // mode holds the velocity of the previous orientation across the interval.
  const CursorState& push(const sensing::ImuSample& sample);

  const CursorState& cursor() const { return cursor_; }
  const sensing::Orientation& orientation() const { return filter_.current(); }
  const sensing::Orientation& zero() const { return zero_; }
  const std::vector<ResetEvent>& resets() const { return resets_; }
  const TransferParams& params() const { return params_; }
  const Screen& screen() const { return screen_; }

 private:
  sensing::OrientationFilter filter_;
  TransferParams params_;
  Screen screen_;
  ResetPolicy policy_;
  CursorState cursor_;
  sensing::Orientation zero_{};
  double t0_ = 0.0;
  bool started_ = false;
  std::vector<ResetEvent> resets_;
};

struct PipelineResult {
  std::vector<CursorState> cursor;  // one state per input sample
  std::vector<sensing::Orientation> orientation;
  std::vector<ResetEvent> resets;
};

PipelineResult run_pipeline(std::span<const sensing::ImuSample> samples,
                            const sensing::CalibrationState& cal,
                            const sensing::FilterParams& fp, const TransferParams& p,
                            const Screen& s, const ResetPolicy& rp, const CursorState& start);

}  // namespace pointlab::transfer
