#pragma once

// Session intake for live trials. Handlers are plain methods so they can be
// exercised without a socket; mount() wires them onto an httplib server.
//
//   POST /api/sessions   one session line object, or an array of them
//   GET  /api/report     report over everything stored
//   GET  /api/health
//   GET  /api/targets?seed=N&trial=K   (trial optional: all trials)

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "pointlab/task.hpp"

namespace httplib {
class Server;
}

namespace pointlab::intake {

// Target geometry for one trial, or all trials when `trial` is empty. Live
// pages fetch this so they show the same disks as the simulator.
nlohmann::json targets_document(const task::TaskConfig& cfg, std::optional<int> trial);

struct Response {
  int status = 200;
  std::string body;  // always JSON
};

class IntakeService {
 public:
  // Loads any sessions already in data_dir/sessions.jsonl.
  IntakeService(std::filesystem::path data_dir, task::TaskConfig targets_cfg);

  Response post_sessions(const std::string& body);
  Response report() const;
  Response health() const;
  Response targets(const std::optional<std::string>& seed,
                   const std::optional<std::string>& trial) const;

  void mount(httplib::Server& server);

  const std::filesystem::path& sessions_path() const { return path_; }
  std::size_t session_count() const;

 private:
  std::filesystem::path path_;
  task::TaskConfig targets_cfg_;
  mutable std::mutex mu_;
  std::vector<task::SessionRecord> sessions_;
  std::set<std::string> ids_;
};

// Blocks until the server stops. Returns nonzero if the port cannot be bound.
int serve(IntakeService& service, const std::string& host, int port);

}  // namespace pointlab::intake
