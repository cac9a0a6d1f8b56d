#include "pointlab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace pointlab::config {

using nlohmann::json;
namespace om = operator_model;

namespace {

// Reads keys from an object and complains about any left unread.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j.is_object()) throw Error(where_ + ": expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json& raw(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void num(const char* key, double& out) {
    if (!has(key)) return;
    const json& v = raw(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) fail(key, "a finite number");
    out = v.get<double>();
  }

  template <typename Int>
  void integer(const char* key, Int& out) {
    if (!has(key)) return;
    const json& v = raw(key);
    if (!v.is_number_integer()) fail(key, "an integer");
    if constexpr (std::is_unsigned_v<Int>) {
      if (v.is_number_unsigned() || v.get<long long>() >= 0) {
        out = v.get<Int>();
        return;
      }
      fail(key, "a non-negative integer");
    } else {
      out = v.get<Int>();
    }
  }

  void boolean(const char* key, bool& out) {
    if (!has(key)) return;
    const json& v = raw(key);
    if (!v.is_boolean()) fail(key, "a boolean");
    out = v.get<bool>();
  }

  void str(const char* key, std::string& out) {
    if (!has(key)) return;
    const json& v = raw(key);
    if (!v.is_string()) fail(key, "a string");
    out = v.get<std::string>();
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw Error(where_ + ": unknown key '" + it.key() + "'");
    }
  }

  const std::string& where() const { return where_; }

 private:
  [[noreturn]] void fail(const char* key, const char* what) const {
    throw Error(where_ + "." + key + ": expected " + what);
  }

  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

void read_device(Reader& r, om::DeviceModel& d) {
  auto& tp = d.transfer;
  r.num("sensitivity", tp.sensitivity);
  r.num("threshold_x", tp.threshold_x);
  r.num("threshold_y", tp.threshold_y);
  r.num("max_speed", tp.max_speed);
  if (r.has("mode")) {
    std::string m;
    r.str("mode", m);
    if (m == "rate") {
      tp.mode = transfer::TransferMode::rate;
    } else if (m == "position") {
      tp.mode = transfer::TransferMode::position;
    } else {
      throw Error(r.where() + ".mode: expected \"rate\" or \"position\"");
    }
  }
  r.num("alpha", d.filter.alpha);
  r.num("sample_rate", d.filter.sample_rate);
  r.num("gyro_bias_walk_sigma", d.drift.gyro_bias_walk_sigma);
  r.num("onset_time", d.drift.onset_time);
  r.num("white_noise_sigma_gyro", d.drift.white_noise_sigma_gyro);
  r.num("white_noise_sigma_accel", d.drift.white_noise_sigma_accel);
  if (r.has("constant_gyro_bias")) {
    const json& v = r.raw("constant_gyro_bias");
    if (!v.is_array() || v.size() != 3) {
      throw Error(r.where() + ".constant_gyro_bias: expected an array of 3 numbers");
    }
    for (std::size_t i = 0; i < 3; ++i) {
      if (!v[i].is_number()) {
        throw Error(r.where() + ".constant_gyro_bias: expected an array of 3 numbers");
      }
      d.drift.constant_gyro_bias[i] = v[i].get<double>();
    }
  }
  r.boolean("reset_enabled", d.reset.enabled);
  r.num("reset_period", d.reset.period);
  r.integer("calibration_samples", d.calibration_samples);
  r.num("max_deflection", d.max_deflection);
  r.finish();
}

json device_to_json(const std::string& model, const om::DeviceModel& d) {
  const auto& tp = d.transfer;
  const auto& b = d.drift.constant_gyro_bias;
  return {{"model", model},
          {"sensitivity", tp.sensitivity},
          {"threshold_x", tp.threshold_x},
          {"threshold_y", tp.threshold_y},
          {"max_speed", tp.max_speed},
          {"mode", tp.mode == transfer::TransferMode::position ? "position" : "rate"},
          {"alpha", d.filter.alpha},
          {"sample_rate", d.filter.sample_rate},
          {"gyro_bias_walk_sigma", d.drift.gyro_bias_walk_sigma},
          {"onset_time", d.drift.onset_time},
          {"white_noise_sigma_gyro", d.drift.white_noise_sigma_gyro},
          {"white_noise_sigma_accel", d.drift.white_noise_sigma_accel},
          {"constant_gyro_bias", {b[0], b[1], b[2]}},
          {"reset_enabled", d.reset.enabled},
          {"reset_period", d.reset.period},
          {"calibration_samples", d.calibration_samples},
          {"max_deflection", d.max_deflection}};
}

void read_operator(Reader& r, om::OperatorParams& op) {
  r.num("reaction_delay", op.reaction_delay);
  r.num("steer_gain", op.steer_gain);
  r.num("max_rate", op.max_rate);
  r.num("tremor_sigma", op.tremor_sigma);
  r.num("lead_time", op.lead_time);
  r.num("hold_relax", op.hold_relax);
  r.num("familiarity", op.familiarity);
  r.num("novice_extra_relax", op.novice_extra_relax);
  r.num("dead_zone_boost", op.dead_zone_boost);
  r.finish();
}

json operator_to_json(const om::OperatorParams& op) {
  return {{"reaction_delay", op.reaction_delay}, {"steer_gain", op.steer_gain},
          {"max_rate", op.max_rate},             {"tremor_sigma", op.tremor_sigma},
          {"lead_time", op.lead_time},           {"hold_relax", op.hold_relax},
          {"familiarity", op.familiarity},       {"novice_extra_relax", op.novice_extra_relax},
          {"dead_zone_boost", op.dead_zone_boost}};
}

GroupConfig read_group(const json& j, std::size_t i) {
  Reader r(j, "groups[" + std::to_string(i) + "]");
  GroupConfig g;
  std::string label;
  if (!r.has("label")) throw Error(r.where() + ": missing 'label'");
  r.str("label", label);
  g.group = task::parse_group(label);
  g.model = label;
  g.op = default_operator(g.group);
  if (r.has("device")) {
    const json& dj = r.raw("device");
    Reader dr(dj, r.where() + ".device");
    dr.str("model", g.model);
    g.device = task::device_model(g.model);
    read_device(dr, g.device);
  } else {
    g.device = task::device_model(g.model);
  }
  if (r.has("operator")) {
    Reader orr(r.raw("operator"), r.where() + ".operator");
    read_operator(orr, g.op);
  }
  r.finish();
  return g;
}

}  // namespace

om::OperatorParams default_operator(task::Group g) {
  om::OperatorParams op;
  if (g == task::Group::control) op.lead_time = 0.0;
  return op;
}

void RunConfig::validate() const {
  task.validate();
  if (participants_per_group < 1) throw Error("config: participants_per_group must be >= 1");
  if (groups.empty()) throw Error("config: at least one group is required");
  if (!(learning.step >= 0.0)) throw Error("config: learning.step must be >= 0");
  if (!(learning.floor > 0.0 && learning.floor <= 1.0)) {
    throw Error("config: learning.floor must lie in (0, 1]");
  }
  for (std::size_t i = 0; i < groups.size(); ++i) {
    groups[i].device.validate();
    groups[i].op.validate();
    for (std::size_t j = 0; j < i; ++j) {
      if (groups[i].group == groups[j].group) {
        throw Error("config: duplicate group label '" +
                    std::string(task::to_string(groups[i].group)) + "'");
      }
    }
  }
}

RunConfig default_run_config() {
  RunConfig c;
  for (task::Group g : task::all_groups()) {
    GroupConfig gc;
    gc.group = g;
    gc.model = std::string(task::to_string(g));
    gc.device = task::device_model(gc.model);
    gc.op = default_operator(g);
    c.groups.push_back(std::move(gc));
  }
  return c;
}

RunConfig from_json(const json& j) {
  Reader r(j, "config");
  if (!r.has("schema_version")) throw Error("config: missing 'schema_version'");
  int version = 0;
  r.integer("schema_version", version);
  if (version != kConfigSchemaVersion) {
    throw Error("config: unsupported schema_version " + std::to_string(version));
  }
  RunConfig c = default_run_config();
  r.integer("master_seed", c.master_seed);
  r.str("output_path", c.output_path);
  r.integer("participants_per_group", c.participants_per_group);
  r.integer("threads", c.threads);

  if (r.has("task")) {
    Reader tr(r.raw("task"), "config.task");
    auto& t = c.task;
    if (tr.has("screen")) {
      Reader sr(tr.raw("screen"), "config.task.screen");
      sr.integer("width", t.screen.width);
      sr.integer("height", t.screen.height);
      sr.finish();
    }
    tr.integer("targets_per_trial", t.targets_per_trial);
    tr.integer("trials_per_participant", t.trials_per_participant);
    tr.num("target_radius_px", t.target_radius);
    tr.num("dwell_s", t.dwell);
    tr.num("min_target_spacing_px", t.min_target_spacing);
    tr.num("timeout_s", t.timeout);
    tr.integer("seed", t.seed);
    tr.finish();
  }
  if (r.has("learning")) {
    Reader lr(r.raw("learning"), "config.learning");
    lr.num("step", c.learning.step);
    lr.num("floor", c.learning.floor);
    lr.boolean("learn_device", c.learning.learn_device);
    lr.finish();
  }
  if (r.has("groups")) {
    const json& gs = r.raw("groups");
    if (!gs.is_array()) throw Error("config.groups: expected an array");
    c.groups.clear();
    for (std::size_t i = 0; i < gs.size(); ++i) c.groups.push_back(read_group(gs[i], i));
  }
  r.finish();
  c.validate();
  return c;
}

json to_json(const RunConfig& c) {
  const auto& t = c.task;
  json groups = json::array();
  for (const auto& g : c.groups) {
    groups.push_back({{"label", std::string(task::to_string(g.group))},
                      {"device", device_to_json(g.model, g.device)},
                      {"operator", operator_to_json(g.op)}});
  }
  return {{"schema_version", kConfigSchemaVersion},
          {"master_seed", c.master_seed},
          {"output_path", c.output_path},
          {"participants_per_group", c.participants_per_group},
          {"threads", c.threads},
          {"task",
           {{"screen", {{"width", t.screen.width}, {"height", t.screen.height}}},
            {"targets_per_trial", t.targets_per_trial},
            {"trials_per_participant", t.trials_per_participant},
            {"target_radius_px", t.target_radius},
            {"dwell_s", t.dwell},
            {"min_target_spacing_px", t.min_target_spacing},
            {"timeout_s", t.timeout},
            {"seed", t.seed}}},
          {"learning",
           {{"step", c.learning.step},
            {"floor", c.learning.floor},
            {"learn_device", c.learning.learn_device}}},
          {"groups", std::move(groups)}};
}

RunConfig load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw Error("config '" + path.string() + "': " + e.what());
  }
  return from_json(j);
}

task::ExperimentPlan make_plan(const RunConfig& c, bool record_path) {
  c.validate();
  task::ExperimentPlan plan;
  plan.task = c.task;
  plan.participants_per_group = c.participants_per_group;
  plan.learning = c.learning;
  plan.master_seed = c.master_seed;
  plan.record_path = record_path;
  plan.threads = c.threads;
  // threads and output_path do not affect results, so keep them out of the
  // snapshot; the same config then yields the same bytes wherever it is written.
  json snap = to_json(c);
  snap.erase("threads");
  snap.erase("output_path");
  plan.config_snapshot = std::move(snap);
  for (const auto& g : c.groups) plan.groups.push_back({g.group, g.device, g.op});
  return plan;
}

}  // namespace pointlab::config
