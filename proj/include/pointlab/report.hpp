#pragma once

// Group summaries, pairwise t-tests and learning curves, as aligned text
// tables or JSON.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pointlab/stats.hpp"
#include "pointlab/task.hpp"

namespace pointlab::report {

struct GroupReport {
  std::string label;
  int sessions = 0;
  int live_sessions = 0;
  std::vector<double> totals;  // trial totals, the statistical unit
  std::optional<stats::GroupSummary> summary;
  std::vector<double> trial_means;  // index k holds trial k + 1
  std::vector<int> trial_counts;
  std::optional<stats::Trendline> trend;
};

struct PairRow {
  std::string a;
  std::string b;
  stats::TTestResult pooled;
  stats::TTestResult welch;
};

// Mean Shannon ID of each target relative to the previous target centre
// (the first target of a trial has no defined start and is skipped).
struct IdRow {
  std::string label;
  int targets = 0;
  double mean_id_bits = 0.0;
  double mean_mt_s = 0.0;
  double throughput_bits_per_s = 0.0;
};

struct Report {
  std::vector<GroupReport> groups;
  std::vector<PairRow> pairs;  // every pair of summarised groups once
  std::vector<IdRow> id_table;
};

Report build(const std::vector<task::SessionRecord>& sessions, bool with_id_table = false);
Report from_summaries(const std::vector<std::pair<std::string, stats::GroupSummary>>& groups);

std::string to_text(const Report& r);
nlohmann::json to_json(const Report& r);

}  // namespace pointlab::report
