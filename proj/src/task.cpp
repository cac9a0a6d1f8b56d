#include "pointlab/task.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <thread>

namespace pointlab::task {

namespace om = operator_model;

std::string_view to_string(Group g) {
  switch (g) {
    case Group::control: return "control";
    case Group::iteration1: return "iteration1";
    case Group::iteration2: return "iteration2";
  }
  return "control";
}

std::string_view to_string(Source s) { return s == Source::live ? "live" : "simulated"; }

Group parse_group(std::string_view s) {
  for (Group g : all_groups()) {
    if (to_string(g) == s) return g;
  }
  throw Error("unknown group '" + std::string(s) + "' (expected control, iteration1, iteration2)");
}

Source parse_source(std::string_view s) {
  if (s == "simulated") return Source::simulated;
  if (s == "live") return Source::live;
  throw Error("unknown source '" + std::string(s) + "' (expected simulated, live)");
}

const std::vector<Group>& all_groups() {
  static const std::vector<Group> groups{Group::control, Group::iteration1, Group::iteration2};
  return groups;
}

void TaskConfig::validate() const {
  screen.validate();
  if (targets_per_trial < 1) throw Error("task: targets_per_trial must be >= 1");
  if (trials_per_participant < 1) throw Error("task: trials_per_participant must be >= 1");
  if (!(target_radius >= 1.0)) throw Error("task: target_radius must be >= 1");
  if (!(dwell > 0.0)) throw Error("task: dwell must be > 0");
  if (!(min_target_spacing >= 0.0)) throw Error("task: min_target_spacing must be >= 0");
  if (!(timeout > dwell)) throw Error("task: timeout must exceed dwell");
}

std::vector<Vec2> generate_targets(const TaskConfig& cfg, int trial_index) {
  cfg.validate();
  const double r = cfg.target_radius;
  const double x_span = static_cast<double>(cfg.screen.width - 1) - 2.0 * r;
  const double y_span = static_cast<double>(cfg.screen.height - 1) - 2.0 * r;
  if (x_span < 0.0 || y_span < 0.0) throw Error("targets: screen too small for target radius");

  const auto n = static_cast<std::size_t>(cfg.targets_per_trial);
  const double s = cfg.min_target_spacing;
  if (n > 1 && s > 0.0) {
    if (s > std::hypot(x_span, y_span)) throw Error("targets: spacing exceeds usable screen");
    // Disks of diameter s around each center must pack into the grown rectangle.
    const double need = static_cast<double>(n) * std::numbers::pi * s * s / 4.0;
    if (need > (x_span + s) * (y_span + s)) {
      throw Error("targets: infeasible target count for spacing");
    }
  }

  std::mt19937_64 rng(derive_seed(cfg.seed, kTargetStream, static_cast<std::uint64_t>(trial_index)));
  auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  std::vector<Vec2> out;
  out.reserve(n);
  for (int attempt = 0; attempt < kMaxPlacementAttempts && out.size() < n; ++attempt) {
    const Vec2 c{r + uniform() * x_span, r + uniform() * y_span};
    const bool ok = std::all_of(out.begin(), out.end(), [&](const Vec2& o) {
      return std::hypot(c[0] - o[0], c[1] - o[1]) >= s;
    });
    if (ok) out.push_back(c);
  }
  if (out.size() < n) {
    throw Error("targets: placement gave up after " + std::to_string(kMaxPlacementAttempts) +
                " attempts");
  }
  return out;
}

double sum_movement_times(const std::vector<TargetResult>& targets) {
  double total = 0.0;
  for (const auto& t : targets) total += t.movement_time_s;
  return total;
}

void SessionRecord::validate() const {
  if (session_id.empty()) throw Error("session: session_id must be non-empty");
  if (participant_id.empty()) throw Error("session: participant_id must be non-empty");
  if (trials.empty()) throw Error("session: no trials");
  for (const auto& tr : trials) {
    if (tr.trial_index < 1) throw Error("session: trial_index must be >= 1");
    if (tr.targets.empty()) throw Error("session: trial has no targets");
    for (const auto& t : tr.targets) {
      if (!std::isfinite(t.movement_time_s) || t.movement_time_s < 0.0) {
        throw Error("session: movement_time_s must be a finite non-negative number");
      }
      if (!(t.radius_px > 0.0) || !std::isfinite(t.x_px) || !std::isfinite(t.y_px)) {
        throw Error("session: invalid target geometry");
      }
    }
    if (std::abs(sum_movement_times(tr.targets) - tr.trial_total) > 1e-6) {
      throw Error("session: trial_total does not match the sum of movement times");
    }
  }
}

om::DeviceModel device_model(std::string_view name) {
  om::DeviceModel m;
  m.name = std::string(name);
  if (name == "control") {
    m.transfer = {20.0, 0.0, 0.0, 3000.0, "control", transfer::TransferMode::position};
    return m;
  }
  m.transfer = transfer::preset(name);
  m.drift.white_noise_sigma_gyro = 0.05;
  m.drift.white_noise_sigma_accel = 0.002;
  m.drift.gyro_bias_walk_sigma = 0.02;
  m.reset.enabled = true;
  return m;
}

namespace {

double round_ms(double s) { return std::round(s * 1000.0) / 1000.0; }

}  // namespace

TrialRecord run_trial(const TaskConfig& cfg, const om::DeviceModel& device,
                      const om::OperatorParams& op, const std::string& participant_id,
                      int trial_index, const TrialOptions& opts) {
  const auto targets = generate_targets(cfg, trial_index);
  om::Operator oper(op);
  const Vec2 center{static_cast<double>(cfg.screen.width - 1) / 2.0,
                    static_cast<double>(cfg.screen.height - 1) / 2.0};
  om::SimulatedDevice dev(device, cfg.screen, center, opts.device_seed);

  TrialRecord rec;
  rec.participant_id = participant_id;
  rec.trial_index = trial_index;
  double offset = 0.0;
  for (const auto& target : targets) {
    auto acq = om::acquire_target(oper, dev, target, cfg.target_radius, cfg.dwell, cfg.timeout);
    rec.targets.push_back({target[0], target[1], cfg.target_radius, round_ms(acq.movement_time),
                           acq.timed_out});
    if (opts.record_path) {
      const std::size_t skip = rec.path.empty() ? 0 : 1;
      for (std::size_t i = skip; i < acq.path.size(); ++i) {
        auto p = acq.path[i];
        p.t += offset;
        rec.path.push_back(p);
      }
    }
    offset += acq.movement_time;
  }
  rec.trial_total = sum_movement_times(rec.targets);
  return rec;
}

void ExperimentPlan::validate() const {
  task.validate();
  if (groups.empty()) throw Error("experiment: no groups");
  if (participants_per_group < 1) throw Error("experiment: participants_per_group must be >= 1");
  for (std::size_t i = 0; i < groups.size(); ++i) {
    groups[i].device.validate();
    groups[i].op.validate();
    for (std::size_t j = 0; j < i; ++j) {
      if (groups[i].group == groups[j].group) throw Error("experiment: duplicate group label");
    }
  }
}

std::vector<SessionRecord> run_experiment(const ExperimentPlan& plan) {
  plan.validate();
  const auto n_groups = plan.groups.size();
  const auto n_part = static_cast<std::size_t>(plan.participants_per_group);
  std::vector<SessionRecord> sessions(n_groups * n_part);

  auto run_one = [&](std::size_t job) {
    const std::size_t g = job / n_part;
    const std::size_t p = job % n_part;
    const GroupPlan& gp = plan.groups[g];

    TaskConfig cfg = plan.task;
    cfg.seed = derive_seed(plan.master_seed, kTaskStream, p);
    const std::uint64_t op_seed = derive_seed(plan.master_seed, kOperatorStream, p);

    char pid[32];
    std::snprintf(pid, sizeof pid, "P%02zu", p + 1);
    SessionRecord s;
    s.group = gp.group;
    s.source = Source::simulated;
    s.participant_id = std::string(to_string(gp.group)) + "-" + pid;
    s.session_id = "sim-" + s.participant_id;
    s.config = plan.config_snapshot;
    for (int k = 1; k <= cfg.trials_per_participant; ++k) {
      om::OperatorParams op = plan.learning.apply(gp.op, k);
      op.seed = derive_seed(op_seed, static_cast<std::uint64_t>(k));
      TrialOptions opts;
      opts.record_path = plan.record_path;
      opts.device_seed = derive_seed(plan.master_seed, kDeviceStream,
                                     static_cast<std::uint64_t>(g) << 32 | p,
                                     static_cast<std::uint64_t>(k));
      s.trials.push_back(run_trial(cfg, gp.device, op, s.participant_id, k, opts));
    }
    sessions[job] = std::move(s);
  };

  const std::size_t jobs = sessions.size();
  unsigned workers = plan.threads != 0 ? plan.threads : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(jobs));
  if (workers == 1) {
    for (std::size_t j = 0; j < jobs; ++j) run_one(j);
    return sessions;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t j = next++; j < jobs; j = next++) run_one(j);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return sessions;
}

}  // namespace pointlab::task
