#pragma once

// Run configuration: a JSON document with a schema_version, defaults for
// every omitted key, and unknown keys rejected so typos surface early.
//
// {
//   "schema_version": 1,
//   "master_seed": 1,
//   "output_path": "sessions.jsonl",
//   "participants_per_group": 8,
//   "threads": 0,
//   "task": {"screen": {"width": 1920, "height": 1080}, "targets_per_trial": 4,
//            "trials_per_participant": 4, "target_radius_px": 24, "dwell_s": 0.5,
//            "min_target_spacing_px": 100, "timeout_s": 60, "seed": 1},
//   "learning": {"step": 0.1, "floor": 0.6, "learn_device": true},
//   "groups": [{"label": "iteration1",
//               "device": {"model": "iteration1", "sensitivity": 25},
//               "operator": {"reaction_delay": 0.25}}]
// }
//
// Device keys override the named model: sensitivity, threshold_x,
// threshold_y, max_speed, mode ("rate" | "position"), alpha, sample_rate,
// gyro_bias_walk_sigma, onset_time, white_noise_sigma_gyro,
// white_noise_sigma_accel, constant_gyro_bias [x, y, z], reset_enabled,
// reset_period, calibration_samples, max_deflection.
// Operator keys: reaction_delay, steer_gain, max_rate, tremor_sigma,
// lead_time, hold_relax, familiarity, novice_extra_relax, dead_zone_boost.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pointlab/operator_model.hpp"
#include "pointlab/task.hpp"

namespace pointlab::config {

inline constexpr int kConfigSchemaVersion = 1;

struct GroupConfig {
  task::Group group = task::Group::control;
  std::string model = "control";
  operator_model::DeviceModel device;
  operator_model::OperatorParams op;
};

struct RunConfig {
  std::uint64_t master_seed = 1;
  std::string output_path = "sessions.jsonl";
  task::TaskConfig task;
  int participants_per_group = 8;
  unsigned threads = 0;
  operator_model::LearningSchedule learning;
  std::vector<GroupConfig> groups;

  void validate() const;
};

// Operator defaults for a group. The touchpad stand-in is a direct pointer,
// so velocity extrapolation only causes overshoot there.
operator_model::OperatorParams default_operator(task::Group g);

// Three groups with the stock device models.
RunConfig default_run_config();

RunConfig from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& c);
RunConfig load(const std::filesystem::path& path);

task::ExperimentPlan make_plan(const RunConfig& c, bool record_path = false);

}  // namespace pointlab::config
