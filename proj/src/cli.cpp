#include "pointlab/cli.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pointlab/config.hpp"
#include "pointlab/intake.hpp"
#include "pointlab/report.hpp"
#include "pointlab/session_io.hpp"
#include "pointlab/stats.hpp"

namespace pointlab::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << data;
  if (!f.flush()) throw Error("write to '" + path + "' failed");
}

config::RunConfig load_config(const std::string& path) {
  return path.empty() ? config::default_run_config() : config::load(path);
}

template <typename T>
T parse_number(std::string_view s, const std::string& what) {
  T v{};
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end || s.empty()) {
    throw Error("invalid " + what + " '" + std::string(s) + "'");
  }
  return v;
}

// LABEL=mean,sd,n
std::pair<std::string, stats::GroupSummary> parse_summary(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error("--summary expects LABEL=mean,sd,n, got '" + arg + "'");
  }
  std::vector<std::string_view> parts;
  std::string_view rest(arg);
  rest.remove_prefix(eq + 1);
  while (true) {
    const auto c = rest.find(',');
    parts.push_back(rest.substr(0, c));
    if (c == std::string_view::npos) break;
    rest.remove_prefix(c + 1);
  }
  if (parts.size() != 3) throw Error("--summary expects LABEL=mean,sd,n, got '" + arg + "'");
  stats::GroupSummary s{parse_number<double>(parts[0], "mean"),
                        parse_number<double>(parts[1], "sd"), parse_number<int>(parts[2], "n")};
  s.validate();
  return {arg.substr(0, eq), s};
}

std::vector<task::SessionRecord> read_all(const std::vector<std::string>& files) {
  std::vector<task::SessionRecord> all;
  for (const auto& f : files) {
    auto s = session_io::read_sessions(f);
    all.insert(all.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
  }
  if (all.empty()) throw Error("no records");
  return all;
}

void emit_report(std::ostream& out, const report::Report& r, bool json) {
  if (json) {
    out << report::to_json(r).dump(2) << "\n";
  } else {
    out << report::to_text(r);
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Glove pointer lab: simulate, replay and analyse pointing experiments", "pointlab"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool json = false;

  auto* sim = app.add_subcommand("simulate", "Run the simulated experiment, write session JSONL");
  bool paths = false;
  sim->add_option("--config", config_path, "Run config (JSON)")->check(CLI::ExistingFile);
  sim->add_option("--seed", seed, "Override master_seed");
  sim->add_option("--out", out_path, "Output JSONL (default: config output_path)");
  sim->add_flag("--paths", paths, "Record cursor paths");

  auto* replay = app.add_subcommand("replay", "Serial log to cursor trace CSV (t,x,y)");
  std::string log_path;
  std::string device = "iteration2";
  std::size_t buffer = sensing::kDefaultBufferLen;
  bool reset = false;
  replay->add_option("log", log_path, "Serial log")->required()->check(CLI::ExistingFile);
  replay->add_option("--device", device, "control, iteration1 or iteration2");
  replay->add_option("--buffer", buffer, "Calibration samples taken from the start")
      ->check(CLI::PositiveNumber);
  replay->add_flag("--reset", reset, "Re-zero every 120 s");
  replay->add_option("--out", out_path, "Output CSV (default: stdout)");

  auto* analyze = app.add_subcommand("analyze", "Report over session JSONL files");
  std::vector<std::string> files;
  bool id_table = false;
  analyze->add_option("files", files, "Session JSONL files")->required()->check(CLI::ExistingFile);
  analyze->add_flag("--json", json, "Machine-readable output");
  analyze->add_flag("--id-table", id_table, "Add the index-of-difficulty table");

  auto* tables = app.add_subcommand("tables", "Summary and t-test tables");
  std::vector<std::string> summaries;
  tables->add_option("--summary", summaries, "LABEL=mean,sd,n (repeatable)");
  tables->add_option("files", files, "Session JSONL files")->check(CLI::ExistingFile);
  tables->add_flag("--json", json, "Machine-readable output");

  auto* srv = app.add_subcommand("serve", "Start the session intake service");
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string data_dir = "data";
  srv->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));
  srv->add_option("--host", host, "Bind address");
  srv->add_option("--data-dir", data_dir, "Directory holding sessions.jsonl");
  srv->add_option("--config", config_path, "Run config for target geometry")
      ->check(CLI::ExistingFile);

  auto* tgt = app.add_subcommand("targets", "Dump generated target sets as JSON");
  int trial = 0;
  tgt->add_option("--config", config_path, "Run config for task geometry")
      ->check(CLI::ExistingFile);
  tgt->add_option("--seed", seed, "Task seed");
  tgt->add_option("--trial", trial, "Single trial index (default: all)")
      ->check(CLI::PositiveNumber);
  tgt->add_option("--out", out_path, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*sim) {
      auto cfg = load_config(config_path);
      if (sim->count("--seed")) cfg.master_seed = seed;
      if (!out_path.empty()) cfg.output_path = out_path;
      const auto sessions = task::run_experiment(config::make_plan(cfg, paths));
      session_io::write_sessions(cfg.output_path, sessions);
      std::size_t trials = 0;
      for (const auto& s : sessions) trials += s.trials.size();
      out << "wrote " << sessions.size() << " sessions (" << trials << " trials) to "
          << cfg.output_path << "\n";
      return 0;
    }
    if (*replay) {
      const auto samples = sensing::parse_serial_log(read_file(log_path));
      if (samples.size() < buffer) {
        throw Error("replay: log has " + std::to_string(samples.size()) +
                    " samples, fewer than the calibration buffer of " + std::to_string(buffer));
      }
      const auto model = task::device_model(device);
      transfer::ResetPolicy rp = model.reset;
      rp.enabled = reset;
      const auto cal = sensing::calibrate(samples, buffer);
      const transfer::Screen screen;
      const transfer::CursorState start{(screen.width - 1) / 2.0, (screen.height - 1) / 2.0,
                                        samples.front().t};
      const auto result =
          transfer::run_pipeline(samples, cal, model.filter, model.transfer, screen, rp, start);
      std::string csv = "t,x,y\n";
      char line[128];
      for (const auto& c : result.cursor) {
        std::snprintf(line, sizeof line, "%.6f,%.6f,%.6f\n", c.t, c.x, c.y);
        csv += line;
      }
      if (out_path.empty()) {
        out << csv;
      } else {
        write_file(out_path, csv);
      }
      return 0;
    }
    if (*analyze) {
      emit_report(out, report::build(read_all(files), id_table), json);
      return 0;
    }
    if (*tables) {
      if (summaries.empty() == files.empty()) {
        throw Error("tables: give either --summary options or JSONL files");
      }
      if (!summaries.empty()) {
        std::vector<std::pair<std::string, stats::GroupSummary>> groups;
        for (const auto& s : summaries) groups.push_back(parse_summary(s));
        emit_report(out, report::from_summaries(groups), json);
      } else {
        auto r = report::build(read_all(files));
        for (auto& g : r.groups) {
          g.trial_means.clear();
          g.trend.reset();
        }
        emit_report(out, r, json);
      }
      return 0;
    }
    if (*srv) {
      intake::IntakeService service(data_dir, load_config(config_path).task);
      return intake::serve(service, host, port);
    }
    if (*tgt) {
      auto cfg = load_config(config_path).task;
      if (tgt->count("--seed")) cfg.seed = seed;
      std::optional<int> k;
      if (trial > 0) k = trial;
      const std::string doc = intake::targets_document(cfg, k).dump(2) + "\n";
      if (out_path.empty()) {
        out << doc;
      } else {
        write_file(out_path, doc);
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace pointlab::cli
