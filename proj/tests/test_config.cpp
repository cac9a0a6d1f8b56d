#include <doctest.h>

#include "pointlab/config.hpp"

using namespace pointlab;
using nlohmann::json;

TEST_CASE("defaults round trip through JSON") {
  auto c = config::default_run_config();
  auto back = config::from_json(config::to_json(c));
  CHECK(config::to_json(back) == config::to_json(c));
  CHECK(back.groups.size() == 3);
  CHECK(back.groups[1].device.transfer == transfer::preset("iteration1"));
}

TEST_CASE("overrides and validation") {
  json j = {{"schema_version", 1},
            {"master_seed", 9},
            {"task", {{"dwell_s", 0.8}, {"screen", {{"width", 1280}, {"height", 720}}}}},
            {"groups",
             {{{"label", "iteration2"},
               {"device", {{"model", "iteration2"}, {"sensitivity", 45}}},
               {"operator", {{"reaction_delay", 0.3}}}}}}};
  auto c = config::from_json(j);
  CHECK(c.master_seed == 9);
  CHECK(c.task.dwell == 0.8);
  CHECK(c.task.screen.width == 1280);
  REQUIRE(c.groups.size() == 1);
  CHECK(c.groups[0].device.transfer.sensitivity == 45);
  CHECK(c.groups[0].device.transfer.threshold_x == 2.0);
  CHECK(c.groups[0].op.reaction_delay == 0.3);

  auto bad = j;
  bad["task"]["dwel_s"] = 1;
  CHECK_THROWS_AS(config::from_json(bad), Error);
  bad = j;
  bad["schema_version"] = 2;
  CHECK_THROWS_AS(config::from_json(bad), Error);
  bad = j;
  bad.erase("schema_version");
  CHECK_THROWS_AS(config::from_json(bad), Error);
  bad = j;
  bad["groups"].push_back(j["groups"][0]);
  CHECK_THROWS_AS(config::from_json(bad), Error);
  bad = j;
  bad["groups"][0]["device"]["model"] = "iteration9";
  CHECK_THROWS_AS(config::from_json(bad), Error);
  bad = j;
  bad["groups"][0]["device"]["sensitivity"] = -1;
  CHECK_THROWS_AS(config::from_json(bad), Error);
  bad = j;
  bad["master_seed"] = "x";
  CHECK_THROWS_AS(config::from_json(bad), Error);
}

TEST_CASE("plan carries a snapshot independent of output path") {
  auto c = config::default_run_config();
  auto a = config::make_plan(c);
  c.output_path = "elsewhere.jsonl";
  c.threads = 4;
  auto b = config::make_plan(c);
  CHECK(a.config_snapshot == b.config_snapshot);
  CHECK(a.groups.size() == 3);
  CHECK(a.config_snapshot["schema_version"] == 1);
}
