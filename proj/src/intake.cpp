#include "pointlab/intake.hpp"

#include <charconv>
#include <cstdio>

#include <httplib.h>
#include <json.hpp>

#include "pointlab/report.hpp"
#include "pointlab/session_io.hpp"

namespace pointlab::intake {

using nlohmann::json;

namespace {

Response error(int status, const std::string& message) {
  return {status, json{{"error", message}}.dump()};
}

Response ok(const json& j) { return {200, j.dump()}; }

template <typename T>
std::optional<T> parse_int(const std::string& s) {
  T v{};
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) return std::nullopt;
  return v;
}

void send(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body, "application/json");
}

}  // namespace

IntakeService::IntakeService(std::filesystem::path data_dir, task::TaskConfig targets_cfg)
    : path_(data_dir / "sessions.jsonl"), targets_cfg_(std::move(targets_cfg)) {
  targets_cfg_.validate();
  std::error_code ec;
  std::filesystem::create_directories(data_dir, ec);
  if (ec) throw Error("cannot create data dir '" + data_dir.string() + "': " + ec.message());
  if (std::filesystem::exists(path_)) sessions_ = session_io::read_sessions(path_);
  for (const auto& s : sessions_) ids_.insert(s.session_id);
}

std::size_t IntakeService::session_count() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

Response IntakeService::post_sessions(const std::string& body) {
  std::vector<task::SessionRecord> incoming;
  try {
    json j = json::parse(body);
    std::vector<json> lines;
    if (j.is_array()) {
      lines.assign(j.begin(), j.end());
    } else {
      lines.push_back(std::move(j));
    }
    if (lines.empty()) return error(400, "no records in payload");
    incoming = session_io::sessions_from_lines(lines);
  } catch (const json::exception& e) {
    return error(400, std::string("invalid JSON: ") + e.what());
  } catch (const Error& e) {
    return error(422, e.what());
  }

  std::set<std::string> seen;
  for (const auto& s : incoming) {
    if (s.source != task::Source::live) {
      return error(422, "session '" + s.session_id + "': source must be \"live\"");
    }
    if (!seen.insert(s.session_id).second) {
      return error(422, "session '" + s.session_id + "' is split across the payload");
    }
  }

  std::lock_guard lock(mu_);
  std::vector<task::SessionRecord> fresh;
  std::vector<std::string> duplicates;
  for (auto& s : incoming) {
    if (ids_.count(s.session_id)) {
      duplicates.push_back(s.session_id);
    } else {
      fresh.push_back(std::move(s));
    }
  }
  if (!fresh.empty()) {
    try {
      session_io::append_sessions(path_, fresh);
    } catch (const Error& e) {
      return error(500, e.what());
    }
  }
  json accepted = json::array();
  for (auto& s : fresh) {
    accepted.push_back(s.session_id);
    ids_.insert(s.session_id);
    sessions_.push_back(std::move(s));
  }
  return {fresh.empty() ? 200 : 201,
          json{{"accepted", std::move(accepted)}, {"duplicates", duplicates}}.dump()};
}

Response IntakeService::report() const {
  std::vector<task::SessionRecord> snapshot;
  {
    std::lock_guard lock(mu_);
    snapshot = sessions_;
  }
  try {
    return ok(report::to_json(report::build(snapshot)));
  } catch (const Error& e) {
    return error(500, e.what());
  }
}

Response IntakeService::health() const { return ok({{"status", "ok"}}); }

json targets_document(const task::TaskConfig& cfg, std::optional<int> trial) {
  const int first = trial.value_or(1);
  const int last = trial.value_or(cfg.trials_per_participant);
  json trials = json::array();
  for (int k = first; k <= last; ++k) {
    json ts = json::array();
    for (const auto& c : task::generate_targets(cfg, k)) {
      ts.push_back({{"x_px", c[0]}, {"y_px", c[1]}, {"radius_px", cfg.target_radius}});
    }
    trials.push_back({{"trial_index", k}, {"targets", std::move(ts)}});
  }
  return {{"seed", cfg.seed},
          {"screen", {{"width", cfg.screen.width}, {"height", cfg.screen.height}}},
          {"dwell_s", cfg.dwell},
          {"trials", std::move(trials)}};
}

Response IntakeService::targets(const std::optional<std::string>& seed,
                                const std::optional<std::string>& trial) const {
  task::TaskConfig cfg = targets_cfg_;
  if (seed) {
    auto v = parse_int<std::uint64_t>(*seed);
    if (!v) return error(400, "seed must be a non-negative integer");
    cfg.seed = *v;
  }
  std::optional<int> k;
  if (trial) {
    k = parse_int<int>(*trial);
    if (!k || *k < 1) return error(400, "trial must be a positive integer");
  }
  try {
    return ok(targets_document(cfg, k));
  } catch (const Error& e) {
    return error(422, e.what());
  }
}

void IntakeService::mount(httplib::Server& server) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
  server.Post("/api/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, post_sessions(req.body));
  });
  server.Get("/api/report", [this](const httplib::Request&, httplib::Response& res) {
    send(res, report());
  });
  server.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
    send(res, health());
  });
  server.Get("/api/targets", [this](const httplib::Request& req, httplib::Response& res) {
    auto param = [&req](const char* key) -> std::optional<std::string> {
      if (!req.has_param(key)) return std::nullopt;
      return req.get_param_value(key);
    };
    send(res, targets(param("seed"), param("trial")));
  });
}

int serve(IntakeService& service, const std::string& host, int port) {
  httplib::Server server;
  service.mount(server);
  if (!server.bind_to_port(host, port)) {
    std::fprintf(stderr, "serve: cannot bind %s:%d\n", host.c_str(), port);
    return 1;
  }
  std::fprintf(stderr, "serve: listening on http://%s:%d, data in %s\n", host.c_str(), port,
               service.sessions_path().string().c_str());
  return server.listen_after_bind() ? 0 : 1;
}

}  // namespace pointlab::intake
