#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "pointlab/session_io.hpp"

using namespace pointlab;
using namespace pointlab::task;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  auto dir = fs::temp_directory_path() / "pointlab_tests";
  fs::create_directories(dir);
  auto p = dir / name;
  fs::remove(p);
  return p;
}

SessionRecord random_session(std::mt19937_64& rng, int id, int trials, bool paths) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SessionRecord s;
  s.session_id = "s" + std::to_string(id);
  s.group = all_groups()[rng() % 3];
  s.source = rng() % 2 ? Source::live : Source::simulated;
  s.participant_id = "p\"" + std::to_string(id) + "\\x";
  s.config = {{"seed", id}, {"note", "quote \" and unicode \xc3\xa9"}};
  for (int k = 1; k <= trials; ++k) {
    TrialRecord tr;
    tr.participant_id = s.participant_id;
    tr.trial_index = k;
    for (int t = 0; t < 4; ++t) {
      tr.targets.push_back({u(rng) * 1919, u(rng) * 1079, 24.0, 0.5 + u(rng) * 20.0,
                            u(rng) < 0.1});
    }
    tr.trial_total = sum_movement_times(tr.targets);
    if (paths) {
      for (int i = 0; i < 5; ++i) tr.path.push_back({i * 0.01, u(rng) * 1919, u(rng) * 1079});
    }
    s.trials.push_back(std::move(tr));
  }
  return s;
}

}  // namespace

TEST_CASE("write then read is the identity") {
  std::mt19937_64 rng(1);
  std::vector<SessionRecord> in;
  for (int i = 0; i < 5; ++i) in.push_back(random_session(rng, i, 4, i % 2 == 0));
  auto path = temp_file("roundtrip.jsonl");
  session_io::write_sessions(path, in);
  CHECK(session_io::read_sessions(path) == in);
  session_io::append_sessions(path, in);
  auto twice = session_io::read_sessions(path);
  CHECK(twice.size() == 10);
}

TEST_CASE("10k record round trip is lossless") {
  std::mt19937_64 rng(2);
  std::vector<SessionRecord> in;
  for (int i = 0; i < 2500; ++i) in.push_back(random_session(rng, i, 4, false));
  auto path = temp_file("big.jsonl");
  session_io::write_sessions(path, in);
  auto out = session_io::read_sessions(path);
  REQUIRE(out.size() == in.size());
  std::size_t lines = 0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    lines += out[i].trials.size();
    CHECK(out[i] == in[i]);
  }
  CHECK(lines == 10000);
}

TEST_CASE("lenient termination and blank lines") {
  std::mt19937_64 rng(3);
  std::vector<SessionRecord> in{random_session(rng, 1, 2, false)};
  auto text = session_io::to_jsonl(in);
  CHECK(session_io::parse_jsonl(text + "\n") == in);
  CHECK(session_io::parse_jsonl(text.substr(0, text.size() - 1)) == in);
  CHECK(session_io::parse_jsonl("").empty());
}

TEST_CASE("malformed lines name their line number") {
  std::mt19937_64 rng(4);
  auto text = session_io::to_jsonl({random_session(rng, 1, 2, false)});
  auto expect_error = [](const std::string& t, const std::string& needle) {
    try {
      session_io::parse_jsonl(t, "f.jsonl");
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
    }
  };
  expect_error(text + "{not json\n", "f.jsonl:3:");
  auto bad_version = text;
  bad_version.replace(bad_version.find("\"schema_version\":1"), 18, "\"schema_version\":2");
  expect_error(bad_version, "schema_version");
  auto neg = text;
  neg.replace(neg.find("\"movement_time_s\":") + 18, 1, "-");
  expect_error(neg, "f.jsonl:1:");
  auto group = text;
  group.replace(group.find("\"group\":\"") + 9, 1, "Z");
  expect_error(group, "unknown group");
  expect_error("[1,2]\n", "f.jsonl:1:");
}

TEST_CASE("line schema") {
  std::mt19937_64 rng(5);
  auto s = random_session(rng, 1, 1, true);
  auto j = session_io::trial_to_json(s, s.trials[0]);
  for (const char* key : {"schema_version", "session_id", "group", "source", "participant_id",
                          "trial_index", "targets", "path", "config"}) {
    CHECK_MESSAGE(j.contains(key), key);
  }
  CHECK(j["targets"][0].size() == 5);
  CHECK(j["path"][0].contains("t_s"));
}
