#include "pointlab/session_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace pointlab::session_io {

using nlohmann::json;

namespace {

const json& field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number()) throw Error(std::string("field '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw Error(std::string("field '") + key + "' must be finite");
  return d;
}

std::string text(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_string()) throw Error(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

task::TargetResult target_from_json(const json& j) {
  if (!j.is_object()) throw Error("target entries must be objects");
  task::TargetResult t;
  t.x_px = number(j, "x_px");
  t.y_px = number(j, "y_px");
  t.radius_px = number(j, "radius_px");
  t.movement_time_s = number(j, "movement_time_s");
  const json& to = field(j, "timeout");
  if (!to.is_boolean()) throw Error("field 'timeout' must be a boolean");
  t.timeout = to.get<bool>();
  return t;
}

struct Line {
  task::SessionRecord head;  // session fields, no trials
  task::TrialRecord trial;
};

Line line_from_json(const json& j) {
  if (!j.is_object()) throw Error("record must be a JSON object");
  const json& ver = field(j, "schema_version");
  if (!ver.is_number_integer() || ver.get<long long>() != kSchemaVersion) {
    throw Error("unknown schema_version " + ver.dump() + " (expected " +
                std::to_string(kSchemaVersion) + ")");
  }
  Line out;
  out.head.session_id = text(j, "session_id");
  out.head.group = task::parse_group(text(j, "group"));
  out.head.source = task::parse_source(text(j, "source"));
  out.head.participant_id = text(j, "participant_id");
  if (auto it = j.find("config"); it != j.end()) {
    if (!it->is_object()) throw Error("field 'config' must be an object");
    out.head.config = *it;
  }

  const json& idx = field(j, "trial_index");
  if (!idx.is_number_integer()) throw Error("field 'trial_index' must be an integer");
  out.trial.trial_index = idx.get<int>();
  out.trial.participant_id = out.head.participant_id;
  const json& targets = field(j, "targets");
  if (!targets.is_array()) throw Error("field 'targets' must be an array");
  for (const auto& t : targets) out.trial.targets.push_back(target_from_json(t));
  if (auto it = j.find("path"); it != j.end()) {
    if (!it->is_array()) throw Error("field 'path' must be an array");
    for (const auto& p : *it) {
      if (!p.is_object()) throw Error("path entries must be objects");
      out.trial.path.push_back({number(p, "t_s"), number(p, "x_px"), number(p, "y_px")});
    }
  }
  out.trial.trial_total = task::sum_movement_times(out.trial.targets);
  task::SessionRecord probe = out.head;
  probe.trials.push_back(out.trial);
  probe.validate();
  return out;
}

void add_line(std::vector<task::SessionRecord>& out, Line l) {
  if (out.empty() || out.back().session_id != l.head.session_id) {
    out.push_back(std::move(l.head));
  } else {
    const auto& head = out.back();
    if (l.head.group != head.group || l.head.source != head.source ||
        l.head.participant_id != head.participant_id) {
      throw Error("session '" + head.session_id + "' changes group, source or participant_id");
    }
  }
  out.back().trials.push_back(std::move(l.trial));
}

}  // namespace

json trial_to_json(const task::SessionRecord& s, const task::TrialRecord& tr) {
  json targets = json::array();
  for (const auto& t : tr.targets) {
    targets.push_back({{"x_px", t.x_px},
                       {"y_px", t.y_px},
                       {"radius_px", t.radius_px},
                       {"movement_time_s", t.movement_time_s},
                       {"timeout", t.timeout}});
  }
  json j = {{"schema_version", kSchemaVersion},
            {"session_id", s.session_id},
            {"group", std::string(task::to_string(s.group))},
            {"source", std::string(task::to_string(s.source))},
            {"participant_id", s.participant_id},
            {"trial_index", tr.trial_index},
            {"targets", std::move(targets)}};
  if (!tr.path.empty()) {
    json path = json::array();
    for (const auto& p : tr.path) path.push_back({{"t_s", p.t}, {"x_px", p.x}, {"y_px", p.y}});
    j["path"] = std::move(path);
  }
  j["config"] = s.config;
  return j;
}

std::string to_jsonl(const std::vector<task::SessionRecord>& sessions) {
  std::string out;
  for (const auto& s : sessions) {
    for (const auto& tr : s.trials) {
      out += trial_to_json(s, tr).dump();
      out += '\n';
    }
  }
  return out;
}

std::vector<task::SessionRecord> sessions_from_lines(const std::vector<json>& lines) {
  std::vector<task::SessionRecord> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      add_line(out, line_from_json(lines[i]));
    } catch (const json::exception& e) {
      throw Error("record " + std::to_string(i + 1) + ": " + e.what());
    } catch (const Error& e) {
      throw Error("record " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

std::vector<task::SessionRecord> parse_jsonl(std::string_view text_in, std::string_view origin) {
  std::vector<task::SessionRecord> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text_in.size()) {
    std::size_t end = text_in.find('\n', pos);
    if (end == std::string_view::npos) end = text_in.size();
    std::string_view line = text_in.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    try {
      add_line(out, line_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

namespace {

void write_impl(const std::filesystem::path& path, const std::vector<task::SessionRecord>& sessions,
                std::ios::openmode mode) {
  std::ofstream f(path, std::ios::binary | mode);
  if (!f) throw Error("cannot open '" + path.string() + "' for writing");
  f << to_jsonl(sessions);
  f.flush();
  if (!f) throw Error("write to '" + path.string() + "' failed");
}

}  // namespace

void write_sessions(const std::filesystem::path& path,
                    const std::vector<task::SessionRecord>& sessions) {
  write_impl(path, sessions, std::ios::trunc);
}

void append_sessions(const std::filesystem::path& path,
                     const std::vector<task::SessionRecord>& sessions) {
  write_impl(path, sessions, std::ios::app);
}

std::vector<task::SessionRecord> read_sessions(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_jsonl(ss.str(), path.string());
}

}  // namespace pointlab::session_io
