#pragma once

// Navigation task: randomly placed targets acquired one after another by
// dwell, grouped into trials, participants and sessions.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pointlab/common.hpp"
#include "pointlab/operator_model.hpp"
#include "pointlab/transfer.hpp"

namespace pointlab::task {

enum class Group { control, iteration1, iteration2 };
enum class Source { simulated, live };

std::string_view to_string(Group g);
std::string_view to_string(Source s);
Group parse_group(std::string_view s);
Source parse_source(std::string_view s);
const std::vector<Group>& all_groups();

struct TaskConfig {
  transfer::Screen screen;
  int targets_per_trial = 4;
  int trials_per_participant = 4;
  double target_radius = 24.0;
  double dwell = 0.5;
  double min_target_spacing = 100.0;
  double timeout = 60.0;
  std::uint64_t seed = 1;

  void validate() const;
};

inline constexpr int kMaxPlacementAttempts = 10'000;

// Centers are drawn uniformly with the whole disk on screen and pairwise
// spacing enforced by rejection. The stream for trial k is seeded with
// derive_seed(cfg.seed, kTargetStream, k), so any trial can be regenerated alone.
inline constexpr std::uint64_t kTargetStream = 0x7461726765747331ULL;
std::vector<Vec2> generate_targets(const TaskConfig& cfg, int trial_index);

struct TargetResult {
  double x_px = 0.0;
  double y_px = 0.0;
  double radius_px = 0.0;
  double movement_time_s = 0.0;
  bool timeout = false;

  bool operator==(const TargetResult&) const = default;
};

struct TrialRecord {
  std::string participant_id;
  int trial_index = 1;
  std::vector<TargetResult> targets;
  double trial_total = 0.0;
  std::vector<operator_model::PathSample> path;  // optional, trial-relative times

  bool operator==(const TrialRecord&) const = default;
};

double sum_movement_times(const std::vector<TargetResult>& targets);

struct SessionRecord {
  std::string session_id;
  Group group = Group::control;
  Source source = Source::simulated;
  std::string participant_id;
  std::vector<TrialRecord> trials;
  nlohmann::json config = nlohmann::json::object();

  void validate() const;
  bool operator==(const SessionRecord&) const = default;
};

// Device models for each experimental group. "control" stands in for the
// touchpad: a noise-free position-mode pointer with no dead zone, 20 px per
// degree. The prototypes get their preset plus sensor noise, bias walk and
// the two-minute reset.
operator_model::DeviceModel device_model(std::string_view name);

struct TrialOptions {
  std::uint64_t device_seed = 1;
  bool record_path = false;
};

TrialRecord run_trial(const TaskConfig& cfg, const operator_model::DeviceModel& device,
                      const operator_model::OperatorParams& op, const std::string& participant_id,
                      int trial_index, const TrialOptions& opts = {});

struct GroupPlan {
  Group group = Group::control;
  operator_model::DeviceModel device;
  operator_model::OperatorParams op;  // seed is replaced per participant
};

struct ExperimentPlan {
  TaskConfig task;
  std::vector<GroupPlan> groups;
  int participants_per_group = 8;
  operator_model::LearningSchedule learning;
  std::uint64_t master_seed = 1;
  bool record_path = false;
  unsigned threads = 0;  // 0: hardware concurrency
  nlohmann::json config_snapshot = nlohmann::json::object();

  void validate() const;
};

// Seeds, per participant slot p (0-based) of group index g:
//   task seed     derive_seed(master, kTaskStream, p)       shared across groups
//   operator seed derive_seed(master, kOperatorStream, p)   shared across groups
//   device seed   derive_seed(master, kDeviceStream, g << 32 | p, trial)
// and the operator's tremor stream for trial k is derive_seed(operator seed, k).
inline constexpr std::uint64_t kTaskStream = 1;
inline constexpr std::uint64_t kOperatorStream = 2;
inline constexpr std::uint64_t kDeviceStream = 3;

// One SessionRecord per participant, ordered by group then participant.
std::vector<SessionRecord> run_experiment(const ExperimentPlan& plan);

}  // namespace pointlab::task
