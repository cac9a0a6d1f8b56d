#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "pointlab/intake.hpp"
#include "pointlab/session_io.hpp"

using namespace pointlab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / "pointlab_tests" / name;
  fs::remove_all(d);
  return d;
}

json live_session(const std::string& id, const std::string& group = "iteration2",
                  int trials = 4) {
  json lines = json::array();
  for (int k = 1; k <= trials; ++k) {
    json targets = json::array();
    for (int t = 0; t < 4; ++t) {
      targets.push_back({{"x_px", 100.0 + 300 * t},
                         {"y_px", 200.0},
                         {"radius_px", 24.0},
                         {"movement_time_s", 1.0 + 0.25 * t + 0.1 * k},
                         {"timeout", false}});
    }
    lines.push_back({{"schema_version", 1},
                     {"session_id", id},
                     {"group", group},
                     {"source", "live"},
                     {"participant_id", "live-" + id},
                     {"trial_index", k},
                     {"targets", targets},
                     {"config", {{"seed", 1}}}});
  }
  return lines;
}

std::string file_text(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("intake handlers") {
  auto dir = fresh_dir("intake");
  intake::IntakeService svc(dir, {});
  CHECK(svc.health().status == 200);
  CHECK(json::parse(svc.health().body)["status"] == "ok");

  auto r = svc.post_sessions(live_session("L1").dump());
  CHECK(r.status == 201);
  auto rep = json::parse(svc.report().body);
  REQUIRE(rep["groups"].size() == 1);
  CHECK(rep["groups"][0]["label"] == "iteration2");
  CHECK(rep["groups"][0]["live_sessions"] == 1);
  CHECK(rep["groups"][0]["trials"] == 4);

  const auto before = file_text(svc.sessions_path());
  SUBCASE("negative MT is rejected and nothing is written") {
    auto bad = live_session("L2");
    bad[2]["targets"][1]["movement_time_s"] = -0.5;
    auto res = svc.post_sessions(bad.dump());
    CHECK(res.status >= 400);
    CHECK(res.status < 500);
    CHECK(json::parse(res.body).contains("error"));
    CHECK(file_text(svc.sessions_path()) == before);
  }
  SUBCASE("simulated source is rejected") {
    auto bad = live_session("L3");
    for (auto& l : bad) l["source"] = "simulated";
    CHECK(svc.post_sessions(bad.dump()).status == 422);
    CHECK(file_text(svc.sessions_path()) == before);
  }
  SUBCASE("garbage and empty payloads") {
    CHECK(svc.post_sessions("{nope").status == 400);
    CHECK(svc.post_sessions("[]").status == 400);
    CHECK(svc.post_sessions(R"({"schema_version": 1})").status == 422);
    CHECK(file_text(svc.sessions_path()) == before);
  }
  SUBCASE("session_id is an idempotency key") {
    auto res = svc.post_sessions(live_session("L1").dump());
    CHECK(res.status == 200);
    CHECK(json::parse(res.body)["duplicates"][0] == "L1");
    CHECK(file_text(svc.sessions_path()) == before);
  }
  SUBCASE("single line object is accepted") {
    auto one = live_session("L4", "control", 1)[0];
    CHECK(svc.post_sessions(one.dump()).status == 201);
    CHECK(svc.session_count() == 2);
  }
  SUBCASE("state survives a restart") {
    intake::IntakeService again(dir, {});
    CHECK(again.session_count() == 1);
    CHECK(again.post_sessions(live_session("L1").dump()).status == 200);
  }
}

TEST_CASE("targets endpoint matches the generator") {
  intake::IntakeService svc(fresh_dir("targets"), {});
  auto r = svc.targets(std::string("42"), std::string("3"));
  REQUIRE(r.status == 200);
  auto j = json::parse(r.body);
  task::TaskConfig cfg;
  cfg.seed = 42;
  const auto expect = task::generate_targets(cfg, 3);
  REQUIRE(j["trials"].size() == 1);
  REQUIRE(j["trials"][0]["targets"].size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(j["trials"][0]["targets"][i]["x_px"] == expect[i][0]);
    CHECK(j["trials"][0]["targets"][i]["y_px"] == expect[i][1]);
  }
  CHECK(json::parse(svc.targets(std::string("42"), std::nullopt).body)["trials"].size() == 4);
  CHECK(svc.targets(std::string("-1"), std::nullopt).status == 400);
  CHECK(svc.targets(std::string("7"), std::string("0")).status == 400);
}

TEST_CASE("concurrent posts over HTTP append intact lines") {
  auto dir = fresh_dir("stress");
  intake::IntakeService svc(dir, {});
  httplib::Server server;
  svc.mount(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  constexpr int kClients = 50;
  std::vector<int> status(kClients, 0);
  std::vector<std::thread> clients;
  for (int i = 0; i < kClients; ++i) {
    clients.emplace_back([&, i] {
      httplib::Client cli("127.0.0.1", port);
      cli.set_connection_timeout(10);
      cli.set_read_timeout(30);
      auto res = cli.Post("/api/sessions", live_session("C" + std::to_string(i), "control", 1).dump(),
                          "application/json");
      status[i] = res ? res->status : -static_cast<int>(res.error());
    });
  }
  for (auto& c : clients) c.join();

  httplib::Client cli("127.0.0.1", port);
  auto health = cli.Get("/api/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(health->get_header_value("Content-Type") == "application/json");
  auto rep = cli.Get("/api/report");
  REQUIRE(rep);
  CHECK(json::parse(rep->body)["groups"][0]["sessions"] == kClients);
  auto tg = cli.Get("/api/targets?seed=5&trial=1");
  REQUIRE(tg);
  CHECK(tg->status == 200);
  server.stop();
  th.join();

  for (int s : status) CHECK(s == 201);
  const auto text = file_text(svc.sessions_path());
  CHECK(std::count(text.begin(), text.end(), '\n') == kClients);
  auto sessions = session_io::parse_jsonl(text);
  CHECK(sessions.size() == kClients);
}
