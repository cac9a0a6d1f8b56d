#include "pointlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace pointlab::report {

using nlohmann::json;

namespace {

void add_pairs(Report& r) {
  for (std::size_t i = 0; i < r.groups.size(); ++i) {
    for (std::size_t j = i + 1; j < r.groups.size(); ++j) {
      const auto& a = r.groups[i];
      const auto& b = r.groups[j];
      if (!a.summary || !b.summary) continue;
      if (a.summary->sd == 0.0 && b.summary->sd == 0.0 && a.summary->mean != b.summary->mean) {
        continue;  // no inference possible
      }
      r.pairs.push_back({a.label, b.label,
                         stats::t_test(*a.summary, *b.summary, stats::VarianceAssumption::pooled),
                         stats::t_test(*a.summary, *b.summary, stats::VarianceAssumption::welch)});
    }
  }
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string p_text(double p) { return p < 0.0005 ? "< 0.001" : fmt("%.3f", p); }

json optional_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

Report build(const std::vector<task::SessionRecord>& sessions, bool with_id_table) {
  Report r;
  for (task::Group g : task::all_groups()) {
    GroupReport gr;
    gr.label = std::string(task::to_string(g));
    IdRow id;
    id.label = gr.label;
    double id_sum = 0.0;
    double mt_sum = 0.0;
    for (const auto& s : sessions) {
      if (s.group != g) continue;
      ++gr.sessions;
      if (s.source == task::Source::live) ++gr.live_sessions;
      for (const auto& tr : s.trials) {
        gr.totals.push_back(tr.trial_total);
        const auto k = static_cast<std::size_t>(tr.trial_index);
        if (gr.trial_means.size() < k) {
          gr.trial_means.resize(k, 0.0);
          gr.trial_counts.resize(k, 0);
        }
        gr.trial_means[k - 1] += tr.trial_total;
        gr.trial_counts[k - 1] += 1;
        for (std::size_t t = 1; t < tr.targets.size(); ++t) {
          const auto& prev = tr.targets[t - 1];
          const auto& cur = tr.targets[t];
          const double d = std::hypot(cur.x_px - prev.x_px, cur.y_px - prev.y_px);
          id_sum += stats::fitts_id(d, 2.0 * cur.radius_px);
          mt_sum += cur.movement_time_s;
          ++id.targets;
        }
      }
    }
    if (gr.sessions == 0) continue;
    for (std::size_t k = 0; k < gr.trial_means.size(); ++k) {
      gr.trial_means[k] = gr.trial_counts[k] > 0
                              ? gr.trial_means[k] / gr.trial_counts[k]
                              : std::numeric_limits<double>::quiet_NaN();
    }
    if (gr.totals.size() >= 2) gr.summary = stats::summarize(gr.totals);
    const bool complete = std::all_of(gr.trial_counts.begin(), gr.trial_counts.end(),
                                      [](int c) { return c > 0; });
    if (gr.trial_means.size() >= 2 && complete) gr.trend = stats::trendline(gr.trial_means);
    if (with_id_table && id.targets > 0) {
      id.mean_id_bits = id_sum / id.targets;
      id.mean_mt_s = mt_sum / id.targets;
      id.throughput_bits_per_s = id.mean_mt_s > 0.0 ? id.mean_id_bits / id.mean_mt_s : 0.0;
      r.id_table.push_back(id);
    }
    r.groups.push_back(std::move(gr));
  }
  add_pairs(r);
  return r;
}

Report from_summaries(const std::vector<std::pair<std::string, stats::GroupSummary>>& groups) {
  Report r;
  for (const auto& [label, s] : groups) {
    s.validate();
    for (const auto& g : r.groups) {
      if (g.label == label) throw Error("duplicate group label '" + label + "'");
    }
    GroupReport gr;
    gr.label = label;
    gr.summary = s;
    r.groups.push_back(std::move(gr));
  }
  add_pairs(r);
  return r;
}

std::string to_text(const Report& r) {
  std::string out;
  char line[256];
  out += "Average completion time per group (trial totals, s)\n";
  std::snprintf(line, sizeof line, "%-14s %10s %10s %6s\n", "group", "mean", "sd", "n");
  out += line;
  for (const auto& g : r.groups) {
    if (g.summary) {
      std::snprintf(line, sizeof line, "%-14s %10.3f %10.3f %6d\n", g.label.c_str(),
                    g.summary->mean, g.summary->sd, g.summary->n);
    } else {
      std::snprintf(line, sizeof line, "%-14s %10s %10s %6zu\n", g.label.c_str(), "-", "-",
                    g.totals.size());
    }
    out += line;
  }

  for (const auto& p : r.pairs) {
    out += "\nComparison between " + p.a + " and " + p.b + "\n";
    std::snprintf(line, sizeof line, "%-34s %9s %9s %9s\n", "", "t", "df", "p");
    out += line;
    for (const auto* row : {&p.pooled, &p.welch}) {
      const char* name = row->assumption == stats::VarianceAssumption::pooled
                             ? "Equal variances assumed"
                             : "Equal variances not assumed";
      std::snprintf(line, sizeof line, "%-34s %9.3f %9.3f %9s\n", name, row->t, row->df,
                    p_text(row->p_two_tailed).c_str());
      out += line;
    }
  }

  bool any_trend = false;
  for (const auto& g : r.groups) any_trend = any_trend || !g.trial_means.empty();
  if (any_trend) {
    out += "\nMean trial total by trial index (s)\n";
    for (const auto& g : r.groups) {
      if (g.trial_means.empty()) continue;
      std::snprintf(line, sizeof line, "%-14s", g.label.c_str());
      out += line;
      for (double m : g.trial_means) out += std::isfinite(m) ? fmt(" %8.3f", m) : "        -";
      if (g.trend) {
        std::snprintf(line, sizeof line, "   slope %8.4f  intercept %8.3f", g.trend->slope,
                      g.trend->intercept);
        out += line;
      }
      out += "\n";
    }
  }

  if (!r.id_table.empty()) {
    out += "\nIndex of difficulty (target to target)\n";
    std::snprintf(line, sizeof line, "%-14s %8s %10s %10s %12s\n", "group", "targets", "ID bits",
                  "MT s", "bits/s");
    out += line;
    for (const auto& row : r.id_table) {
      std::snprintf(line, sizeof line, "%-14s %8d %10.3f %10.3f %12.3f\n", row.label.c_str(),
                    row.targets, row.mean_id_bits, row.mean_mt_s, row.throughput_bits_per_s);
      out += line;
    }
  }
  return out;
}

json to_json(const Report& r) {
  json groups = json::array();
  for (const auto& g : r.groups) {
    json j = {{"label", g.label}, {"sessions", g.sessions}, {"live_sessions", g.live_sessions},
              {"trials", g.summary ? g.summary->n : static_cast<int>(g.totals.size())}};
    if (g.summary) {
      j["mean"] = g.summary->mean;
      j["sd"] = g.summary->sd;
      j["n"] = g.summary->n;
    }
    if (!g.trial_means.empty()) {
      json means = json::array();
      for (double m : g.trial_means) means.push_back(optional_number(m));
      j["trial_means"] = std::move(means);
      j["trial_counts"] = g.trial_counts;
    }
    if (g.trend) j["trendline"] = {{"slope", g.trend->slope}, {"intercept", g.trend->intercept}};
    groups.push_back(std::move(j));
  }
  json pairs = json::array();
  for (const auto& p : r.pairs) {
    json rows = json::array();
    for (const auto* row : {&p.pooled, &p.welch}) {
      rows.push_back({{"assumption", std::string(stats::to_string(row->assumption))},
                      {"t", row->t},
                      {"df", row->df},
                      {"p_two_tailed", row->p_two_tailed}});
    }
    pairs.push_back({{"a", p.a}, {"b", p.b}, {"tests", std::move(rows)}});
  }
  json out = {{"groups", std::move(groups)}, {"pairs", std::move(pairs)}};
  if (!r.id_table.empty()) {
    json ids = json::array();
    for (const auto& row : r.id_table) {
      ids.push_back({{"label", row.label},
                     {"targets", row.targets},
                     {"mean_id_bits", row.mean_id_bits},
                     {"mean_mt_s", row.mean_mt_s},
                     {"throughput_bits_per_s", row.throughput_bits_per_s}});
    }
    out["id_table"] = std::move(ids);
  }
  return out;
}

}  // namespace pointlab::report
